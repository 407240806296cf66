#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "tagreuse/folksonomy.hpp"

namespace tagreuse {

// Reads the dataset format: one post per line,
//   user<TAB>resource<TAB>unix_timestamp<TAB>tag1,tag2,...
// Blank lines and lines starting with '#' are skipped. Tags are case-folded
// and trimmed; repeated tags on a line collapse. Throws ParseError with the
// 1-based line number on malformed input and DataError on an empty dataset.
Folksonomy parse_posts(std::istream& in);
Folksonomy read_dataset(const std::filesystem::path& path);

// Canonical writer: posts in folksonomy order, tags sorted by name.
void write_posts(std::ostream& out, const Folksonomy& folksonomy);
std::string to_tsv(const Folksonomy& folksonomy);

}  // namespace tagreuse
