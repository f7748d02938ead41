#pragma once

#include <filesystem>
#include <iosfwd>

#include "cqa/pipeline.hpp"

namespace cqa {

// Current on-disk index format. Readers reject any other version.
inline constexpr int kIndexFormatVersion = 1;

void write_index(std::ostream& out, const CandidateIndex& index);
// Throws InputError on malformed content or a version mismatch.
CandidateIndex read_index(std::istream& in);

void save_index(const std::filesystem::path& path, const CandidateIndex& index);
CandidateIndex load_index(const std::filesystem::path& path);

}  // namespace cqa
