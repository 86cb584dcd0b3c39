#include "generator_spec.hpp"

#include <charconv>
#include <filesystem>
#include <sstream>
#include <vector>

#include "exactsub/graph_io.hpp"

namespace exactsub::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

template <typename T>
T parse_number(const std::string& text, const std::string& spec) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw UsageError("generator spec '" + spec + "': '" + text + "' is not a valid number");
  return value;
}

void expect_fields(const std::vector<std::string>& parts, std::size_t count, const std::string& spec,
                   const std::string& form) {
  if (parts.size() != count) throw UsageError("generator spec '" + spec + "' must look like " + form);
}

}  // namespace

Graph load_graph_file(const std::string& path, std::vector<std::string>* warnings) {
  if (!std::filesystem::exists(path)) throw UsageError("graph file '" + path + "' does not exist");
  return read_graph_file(path, warnings);
}

Graph parse_generator_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  if (kind == "complement") {
    if (colon == std::string::npos || colon + 1 == spec.size())
      throw UsageError("generator spec '" + spec + "' must look like complement:<path>");
    return complement(load_graph_file(spec.substr(colon + 1)));
  }
  const auto parts = split(spec, ':');
  try {
    if (kind == "paley") {
      expect_fields(parts, 2, spec, "paley:<q>");
      return paley(parse_number<int>(parts[1], spec));
    }
    if (kind == "er") {
      expect_fields(parts, 4, spec, "er:<n>:<p>:<seed>");
      return erdos_renyi(parse_number<int>(parts[1], spec), parse_number<double>(parts[2], spec),
                         parse_number<std::uint64_t>(parts[3], spec));
    }
    if (kind == "hamming64") {
      expect_fields(parts, 1, spec, "hamming64");
      return hamming_complement_6_4();
    }
    if (kind == "circulant") {
      expect_fields(parts, 3, spec, "circulant:<n>:<d1,d2,...>");
      std::vector<int> offsets;
      for (const auto& d : split(parts[2], ',')) offsets.push_back(parse_number<int>(d, spec));
      return circulant(parse_number<int>(parts[1], spec), offsets);
    }
    if (kind == "cycle" || kind == "path" || kind == "empty" || kind == "complete") {
      expect_fields(parts, 2, spec, kind + ":<n>");
      const int n = parse_number<int>(parts[1], spec);
      if (kind == "cycle") return cycle_graph(n);
      if (kind == "path") return path_graph(n);
      if (kind == "empty") return empty_graph(n);
      return complete_graph(n);
    }
  } catch (const GraphError& e) {
    throw UsageError("generator spec '" + spec + "': " + e.what());
  }
  throw UsageError("unknown generator '" + kind +
                   "' (expected paley, er, hamming64, circulant, cycle, path, empty, complete or complement)");
}

}  // namespace exactsub::cli
