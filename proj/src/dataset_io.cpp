#include "tagreuse/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace tagreuse {
namespace {

std::vector<std::string_view> split_on(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (true) {
    std::size_t pos = text.find(sep, begin);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(begin));
      return out;
    }
    out.push_back(text.substr(begin, pos - begin));
    begin = pos + 1;
  }
}

PostRecord parse_line(std::string_view line, std::size_t line_no) {
  auto fields = split_on(line, '\t');
  if (fields.size() != 4) {
    throw ParseError(line_no, "expected 4 tab-separated fields, got " +
                                  std::to_string(fields.size()));
  }
  PostRecord rec;
  rec.user = trim(fields[0]);
  rec.resource = trim(fields[1]);
  if (rec.user.empty()) throw ParseError(line_no, "empty user id");
  if (rec.resource.empty()) throw ParseError(line_no, "empty resource id");

  const std::string ts = trim(fields[2]);
  const char* first = ts.data();
  const char* last = ts.data() + ts.size();
  auto [ptr, ec] = std::from_chars(first, last, rec.timestamp);
  if (ts.empty() || ec != std::errc() || ptr != last) {
    throw ParseError(line_no, "timestamp is not an integer: '" + ts + "'");
  }
  if (rec.timestamp < 0) throw ParseError(line_no, "negative timestamp");

  for (auto raw : split_on(fields[3], ',')) {
    std::string tag = normalize_tag(raw);
    if (tag.empty()) continue;
    if (std::find(rec.tags.begin(), rec.tags.end(), tag) == rec.tags.end()) {
      rec.tags.push_back(std::move(tag));
    }
  }
  if (rec.tags.empty()) throw ParseError(line_no, "empty tag list");
  return rec;
}

}  // namespace

Folksonomy parse_posts(std::istream& in) {
  std::vector<PostRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (trim(line).empty()) continue;
    records.push_back(parse_line(line, line_no));
  }
  if (records.empty()) throw DataError("empty dataset");
  return Folksonomy::from_records(std::move(records));
}

Folksonomy read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset '" + path.string() + "'");
  try {
    return parse_posts(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e.line(), e.detail());
  }
}

void write_posts(std::ostream& out, const Folksonomy& folksonomy) {
  std::vector<std::string_view> names;
  for (const auto& post : folksonomy.posts()) {
    names.clear();
    for (TagId t : post.tags) names.emplace_back(folksonomy.tag_name(t));
    std::sort(names.begin(), names.end());
    out << folksonomy.user_name(post.user) << '\t' << folksonomy.resource_name(post.resource)
        << '\t' << post.timestamp << '\t';
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (i > 0) out << ',';
      out << names[i];
    }
    out << '\n';
  }
}

std::string to_tsv(const Folksonomy& folksonomy) {
  std::ostringstream out;
  write_posts(out, folksonomy);
  return out.str();
}

}  // namespace tagreuse
