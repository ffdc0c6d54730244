#pragma once

// Block plans: a digit sequence described as a list of segments whose
// lengths may be astronomically large. Plans are materialized lazily by a
// cursor and analysed symbolically through zero-run summaries.

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "betadyn/expansion.hpp"
#include "betadyn/numerics.hpp"

namespace betadyn {

// Zero-run profile of a digit block. The longest run is an interval when a
// block was summarized without visiting every digit.
struct RunSummary {
  Integer length = 0;
  Integer lead = 0;
  Integer trail = 0;
  Integer longest_lo = 0;
  Integer longest_hi = 0;

  bool all_zero() const { return lead == length; }
  bool exact() const { return longest_lo == longest_hi; }

  static RunSummary of(std::span<const Digit> digits);
  static RunSummary zeros(const Integer& length);

  RunSummary then(const RunSummary& next) const;
  RunSummary repeated(const Integer& count) const;
};

// Lex-sorted set of equal-length words with per-word run profiles.
class WordSet {
 public:
  WordSet(std::size_t length, std::vector<DigitWord> words);

  std::size_t length() const { return length_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<DigitWord>& words() const { return words_; }
  const DigitWord& word(std::size_t i) const { return words_[i]; }
  const RunSummary& summary(std::size_t i) const { return summaries_[i]; }

  // Bounds over all words, used for blocks too long to visit.
  std::uint64_t max_longest() const { return max_longest_; }
  std::uint64_t max_lead() const { return max_lead_; }
  std::uint64_t max_trail() const { return max_trail_; }

  std::uint64_t count_with_prefix(std::span<const Digit> prefix) const;

 private:
  std::size_t length_;
  std::vector<DigitWord> words_;
  std::vector<RunSummary> summaries_;
  std::uint64_t max_longest_ = 0;
  std::uint64_t max_lead_ = 0;
  std::uint64_t max_trail_ = 0;
};

// `count` independent uniform draws from a word set. Draw i is a pure
// function of (seed, level, i), so any draw is addressable without
// generating its predecessors.
class DrawSequence {
 public:
  DrawSequence(std::shared_ptr<const WordSet> words, std::uint64_t seed, unsigned level, Integer count);

  const WordSet& words() const { return *words_; }
  const Integer& count() const { return count_; }
  Integer length() const { return count_ * static_cast<unsigned long>(words_->length()); }

  std::size_t index(const Integer& i) const;
  const DigitWord& word(const Integer& i) const { return words_->word(index(i)); }

  // Exact when count <= exact_cap, otherwise the longest run is bracketed
  // from the first and last draws and the word-set bounds.
  RunSummary summary(std::uint64_t exact_cap) const;

 private:
  std::shared_ptr<const WordSet> words_;
  std::uint64_t seed_;
  unsigned level_;
  Integer count_;
};

struct Literal {
  DigitWord digits;
};
struct ZeroRun {
  Integer length;
};
struct Repeat {
  DigitWord unit;
  Integer count;
};
struct Draws {
  DrawSequence draws;
};
using Segment = std::variant<Literal, ZeroRun, Repeat, Draws>;

Integer segment_length(const Segment& segment);

struct Boundary {
  unsigned label;
  std::size_t segments;  // number of segments before the boundary
  Integer position;
};

class BlockPlan {
 public:
  void append(Segment segment);
  // Records a labelled boundary at the current end of the plan.
  void mark(unsigned label);

  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<Boundary>& boundaries() const { return boundaries_; }
  const Integer& length() const { return length_; }
  // Throws std::out_of_range for an unknown label.
  const Integer& boundary(unsigned label) const;

 private:
  std::vector<Segment> segments_;
  std::vector<Boundary> boundaries_;
  Integer length_ = 0;
};

inline constexpr std::uint64_t kDefaultExactDrawCap = 1u << 22;

// r_n at each checkpoint, which must be a boundary position. The value is an
// interval [longest_lo, longest_hi]; it is a single number whenever the
// bracketed draw blocks cannot influence it.
std::map<Integer, RunSummary> symbolic_runlengths(const BlockPlan& plan, const std::vector<Integer>& checkpoints,
                                                  std::uint64_t exact_draw_cap = kDefaultExactDrawCap);

// Forward-only digit cursor over a plan.
class PlanCursor {
 public:
  explicit PlanCursor(std::shared_ptr<const BlockPlan> plan);

  bool done() const { return segment_ >= plan_->segments().size(); }
  std::uint64_t position() const { return position_; }
  Digit next();
  // Fills up to out.size() digits; returns how many were written.
  std::size_t read(std::span<Digit> out);

 private:
  void enter_segment();

  std::shared_ptr<const BlockPlan> plan_;
  std::size_t segment_ = 0;
  std::uint64_t offset_ = 0;     // within the current segment
  std::uint64_t remaining_ = 0;  // digits left in the current segment (saturated)
  std::uint64_t position_ = 0;
};

}  // namespace betadyn
