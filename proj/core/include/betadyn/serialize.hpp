#pragma once

// JSON and CSV output for schedules, reports and digit streams. Big integers
// are written as decimal strings and enclosures as [lo, hi] rational pairs.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "betadyn/analysis.hpp"
#include "betadyn/constructions.hpp"

namespace betadyn {

std::string to_json(const EpSchedule& schedule);
std::string to_json(const USchedule& schedule);

// Rebuilds an E_p schedule from its JSON form: beta, p, phi and n are read,
// everything else is recomputed and must match the file. Throws
// std::invalid_argument on malformed input and Infeasible on a violated
// invariant.
EpSchedule ep_schedule_from_json(const std::string& text, const SearchLimits& limits = {});

std::string checkpoints_csv(const CheckpointReport& report);
std::string checkpoints_json(const CheckpointReport& report);

std::string census_csv_header();
std::string census_csv_row(const CensusRecord& record);

std::string counts_csv(const std::vector<CountReport>& reports);
std::string counts_json(const std::vector<CountReport>& reports);

std::string profile_csv(const std::vector<DimensionSample>& samples);

std::string mc_csv(const McReport& report);
std::string mc_json(const McReport& report);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::uint8_t* data, std::size_t size, std::uint64_t hash = 0xcbf29ce484222325ULL);

inline constexpr std::size_t kChunkDigits = std::size_t{1} << 20;

struct StreamChunk {
  std::size_t index = 0;
  std::size_t length = 0;
  std::uint64_t digest = 0;
};

// Writes up to `max_digits` digits from `cursor` into chunk files
// (one byte per digit) under `dir` and returns the chunk list.
std::vector<StreamChunk> write_stream_chunks(PlanCursor& cursor, std::uint64_t max_digits,
                                             const std::filesystem::path& dir, std::size_t chunk_digits = kChunkDigits);

std::string chunk_file_name(std::size_t index);

std::string manifest_json(const std::string& beta, const std::string& schedule_file,
                          const std::vector<StreamChunk>& chunks);

// Outward-rounded decimal form "[lo, hi]" for display.
std::string decimal_enclosure(const Enclosure& e, unsigned digits = 9);

}  // namespace betadyn
