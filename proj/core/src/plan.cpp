#include "betadyn/plan.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

#include "betadyn/errors.hpp"

namespace betadyn {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Integer to_integer(std::uint64_t v) {
  Integer out;
  mpz_import(out.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return out;
}

std::uint64_t saturate(const Integer& v) {
  if (v < 0) return 0;
  if (mpz_sizeinbase(v.get_mpz_t(), 2) > 64) return std::numeric_limits<std::uint64_t>::max();
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

const Integer& max3(const Integer& a, const Integer& b, const Integer& c) {
  const Integer& ab = a < b ? b : a;
  return ab < c ? c : ab;
}

// Plain 64-bit run profile for hot loops.
struct SmallRuns {
  std::uint64_t length = 0, lead = 0, trail = 0, longest = 0;

  void append(const RunSummary& s) {
    const std::uint64_t len = saturate(s.length), lead_s = saturate(s.lead), trail_s = saturate(s.trail);
    const std::uint64_t junction = trail + lead_s;
    longest = std::max({longest, saturate(s.longest_lo), junction});
    if (lead == length) lead = length + lead_s;
    trail = lead_s == len ? trail + len : trail_s;
    length += len;
  }

  RunSummary to_summary() const {
    RunSummary out;
    out.length = to_integer(length);
    out.lead = to_integer(lead);
    out.trail = to_integer(trail);
    out.longest_lo = to_integer(longest);
    out.longest_hi = out.longest_lo;
    return out;
  }
};

}  // namespace

RunSummary RunSummary::of(std::span<const Digit> digits) {
  RunLengthState state;
  std::uint64_t lead = 0;
  bool leading = true;
  for (Digit d : digits) {
    state.push(d);
    if (leading && d == 0) ++lead;
    if (d != 0) leading = false;
  }
  RunSummary out;
  out.length = to_integer(digits.size());
  out.lead = to_integer(lead);
  out.trail = to_integer(state.trailing);
  out.longest_lo = to_integer(state.longest);
  out.longest_hi = out.longest_lo;
  return out;
}

RunSummary RunSummary::zeros(const Integer& length) {
  if (length < 0) throw std::invalid_argument("negative zero-run length");
  return RunSummary{length, length, length, length, length};
}

RunSummary RunSummary::then(const RunSummary& next) const {
  RunSummary out;
  out.length = length + next.length;
  out.lead = all_zero() ? Integer(length + next.lead) : lead;
  out.trail = next.all_zero() ? Integer(trail + next.length) : next.trail;
  const Integer junction = trail + next.lead;
  out.longest_lo = max3(longest_lo, next.longest_lo, junction);
  out.longest_hi = max3(longest_hi, next.longest_hi, junction);
  return out;
}

RunSummary RunSummary::repeated(const Integer& count) const {
  if (count < 0) throw std::invalid_argument("negative repetition count");
  if (count == 0) return RunSummary{};
  if (all_zero()) return zeros(length * count);
  RunSummary out = *this;
  out.length = length * count;
  if (count >= 2) {
    const Integer junction = trail + lead;
    if (out.longest_lo < junction) out.longest_lo = junction;
    if (out.longest_hi < junction) out.longest_hi = junction;
  }
  return out;
}

WordSet::WordSet(std::size_t length, std::vector<DigitWord> words) : length_(length), words_(std::move(words)) {
  std::sort(words_.begin(), words_.end());
  words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
  summaries_.reserve(words_.size());
  for (const auto& w : words_) {
    if (w.size() != length_) throw std::invalid_argument("word set entries must share one length");
    summaries_.push_back(RunSummary::of(w));
    const RunSummary& s = summaries_.back();
    max_longest_ = std::max(max_longest_, saturate(s.longest_lo));
    max_lead_ = std::max(max_lead_, saturate(s.lead));
    max_trail_ = std::max(max_trail_, saturate(s.trail));
  }
}

std::uint64_t WordSet::count_with_prefix(std::span<const Digit> prefix) const {
  if (prefix.size() > length_) return 0;
  const auto less_prefix = [&](const DigitWord& w, std::span<const Digit> p) {
    return std::lexicographical_compare(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p.size()), p.begin(),
                                        p.end());
  };
  const auto prefix_less = [&](std::span<const Digit> p, const DigitWord& w) {
    return std::lexicographical_compare(p.begin(), p.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p.size()));
  };
  const auto lo = std::lower_bound(words_.begin(), words_.end(), prefix, less_prefix);
  const auto hi = std::upper_bound(lo, words_.end(), prefix, prefix_less);
  return static_cast<std::uint64_t>(hi - lo);
}

DrawSequence::DrawSequence(std::shared_ptr<const WordSet> words, std::uint64_t seed, unsigned level, Integer count)
    : words_(std::move(words)), seed_(seed), level_(level), count_(std::move(count)) {
  if (!words_ || words_->size() == 0) throw std::invalid_argument("draws need a nonempty word set");
  if (count_ < 0) throw std::invalid_argument("negative draw count");
}

std::size_t DrawSequence::index(const Integer& i) const {
  std::uint64_t key = splitmix64(seed_ ^ splitmix64(0x5eed0000ULL + level_));
  const std::size_t limbs = mpz_size(i.get_mpz_t());
  for (std::size_t j = 0; j < std::max<std::size_t>(limbs, 1); ++j) {
    const std::uint64_t limb = j < limbs ? mpz_getlimbn(i.get_mpz_t(), static_cast<mp_size_t>(j)) : 0;
    key = splitmix64(key ^ limb);
  }
  const std::uint64_t n = words_->size();
  // Rejection sampling removes modulo bias.
  const std::uint64_t threshold = (0 - n) % n;
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t x = splitmix64(key + attempt * 0xd1b54a32d192ed03ULL);
    if (x >= threshold) return static_cast<std::size_t>(x % n);
  }
}

RunSummary DrawSequence::summary(std::uint64_t exact_cap) const {
  if (count_ == 0) return RunSummary{};
  if (count_ <= to_integer(exact_cap)) {
    SmallRuns acc;
    const std::uint64_t n = saturate(count_);
    for (std::uint64_t i = 0; i < n; ++i) acc.append(words_->summary(index(to_integer(i))));
    return acc.to_summary();
  }
  if (words_->max_lead() == words_->length()) {
    throw Unreachable("draw block of " + count_.get_str() + " words over a set containing the zero word");
  }
  const RunSummary& first = words_->summary(index(0));
  const RunSummary& last = words_->summary(index(count_ - 1));
  RunSummary out;
  out.length = length();
  out.lead = first.lead;
  out.trail = last.trail;
  out.longest_lo = first.longest_lo < last.longest_lo ? last.longest_lo : first.longest_lo;
  out.longest_hi = to_integer(std::max(words_->max_longest(), words_->max_trail() + words_->max_lead()));
  if (out.longest_hi < out.longest_lo) out.longest_hi = out.longest_lo;
  return out;
}

Integer segment_length(const Segment& segment) {
  return std::visit(
      [](const auto& s) -> Integer {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Literal>) return to_integer(s.digits.size());
        if constexpr (std::is_same_v<T, ZeroRun>) return s.length;
        if constexpr (std::is_same_v<T, Repeat>) return s.count * static_cast<unsigned long>(s.unit.size());
        if constexpr (std::is_same_v<T, Draws>) return s.draws.length();
      },
      segment);
}

void BlockPlan::append(Segment segment) {
  length_ += segment_length(segment);
  segments_.push_back(std::move(segment));
}

void BlockPlan::mark(unsigned label) { boundaries_.push_back(Boundary{label, segments_.size(), length_}); }

const Integer& BlockPlan::boundary(unsigned label) const {
  for (const auto& b : boundaries_) {
    if (b.label == label) return b.position;
  }
  throw std::out_of_range("plan has no boundary labelled " + std::to_string(label));
}

std::map<Integer, RunSummary> symbolic_runlengths(const BlockPlan& plan, const std::vector<Integer>& checkpoints,
                                                  std::uint64_t exact_draw_cap) {
  std::set<Integer> wanted;
  for (const auto& c : checkpoints) {
    const bool on_boundary = std::any_of(plan.boundaries().begin(), plan.boundaries().end(),
                                         [&](const Boundary& b) { return b.position == c; });
    if (!on_boundary) throw std::invalid_argument("checkpoint " + c.get_str() + " is not a block boundary");
    wanted.insert(c);
  }
  std::map<Integer, RunSummary> out;
  if (wanted.empty()) return out;
  const Integer last = *wanted.rbegin();

  RunSummary acc;
  const auto record = [&]() {
    if (wanted.count(acc.length)) out.emplace(acc.length, acc);
  };
  record();
  for (const auto& segment : plan.segments()) {
    if (acc.length >= last) break;
    const RunSummary s = std::visit(
        [&](const auto& seg) -> RunSummary {
          using T = std::decay_t<decltype(seg)>;
          if constexpr (std::is_same_v<T, Literal>) return RunSummary::of(seg.digits);
          if constexpr (std::is_same_v<T, ZeroRun>) return RunSummary::zeros(seg.length);
          if constexpr (std::is_same_v<T, Repeat>) return RunSummary::of(seg.unit).repeated(seg.count);
          if constexpr (std::is_same_v<T, Draws>) return seg.draws.summary(exact_draw_cap);
        },
        segment);
    acc = acc.then(s);
    record();
  }
  return out;
}

PlanCursor::PlanCursor(std::shared_ptr<const BlockPlan> plan) : plan_(std::move(plan)) { enter_segment(); }

void PlanCursor::enter_segment() {
  offset_ = 0;
  while (segment_ < plan_->segments().size()) {
    remaining_ = saturate(segment_length(plan_->segments()[segment_]));
    if (remaining_ > 0) return;
    ++segment_;
  }
  remaining_ = 0;
}

Digit PlanCursor::next() {
  if (done()) throw std::out_of_range("plan exhausted");
  const Segment& seg = plan_->segments()[segment_];
  Digit d = 0;
  if (const auto* lit = std::get_if<Literal>(&seg)) {
    d = lit->digits[offset_];
  } else if (const auto* rep = std::get_if<Repeat>(&seg)) {
    d = rep->unit[offset_ % rep->unit.size()];
  } else if (const auto* dr = std::get_if<Draws>(&seg)) {
    const std::uint64_t len = dr->draws.words().length();
    d = dr->draws.word(to_integer(offset_ / len))[offset_ % len];
  }
  ++offset_;
  ++position_;
  if (--remaining_ == 0) {
    ++segment_;
    enter_segment();
  }
  return d;
}

std::size_t PlanCursor::read(std::span<Digit> out) {
  std::size_t written = 0;
  while (written < out.size() && !done()) {
    const Segment& seg = plan_->segments()[segment_];
    const std::size_t room = out.size() - written;
    if (std::holds_alternative<ZeroRun>(seg)) {
      const std::size_t take = static_cast<std::size_t>(std::min<std::uint64_t>(room, remaining_));
      std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(written), take, Digit{0});
      written += take;
      position_ += take;
      offset_ += take;
      remaining_ -= take;
      if (remaining_ == 0) {
        ++segment_;
        enter_segment();
      }
      continue;
    }
    if (const auto* dr = std::get_if<Draws>(&seg)) {
      // Copy whole words at a time.
      const std::uint64_t len = dr->draws.words().length();
      const DigitWord& w = dr->draws.word(to_integer(offset_ / len));
      const std::uint64_t in_word = offset_ % len;
      const std::size_t take = static_cast<std::size_t>(std::min<std::uint64_t>(room, len - in_word));
      std::copy_n(w.begin() + static_cast<std::ptrdiff_t>(in_word), take,
                  out.begin() + static_cast<std::ptrdiff_t>(written));
      written += take;
      position_ += take;
      offset_ += take;
      remaining_ -= take;
      if (remaining_ == 0) {
        ++segment_;
        enter_segment();
      }
      continue;
    }
    out[written++] = next();
  }
  return written;
}

}  // namespace betadyn
