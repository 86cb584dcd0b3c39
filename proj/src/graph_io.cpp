#include "exactsub/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace exactsub {

namespace {

std::string location(int line_no) { return "line " + std::to_string(line_no) + ": "; }

}  // namespace

DimacsResult parse_dimacs(std::istream& in) {
  DimacsResult result;
  int n = -1;
  long long declared_m = -1;
  std::vector<Edge> edges;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag == "c") continue;
    if (tag == "p") {
      if (n >= 0) throw GraphError(location(line_no) + "second problem line");
      std::string format;
      if (!(ls >> format >> n >> declared_m) || (format != "edge" && format != "col") ||
          n < 0 || declared_m < 0)
        throw GraphError(location(line_no) + "malformed problem line '" + line + "'");
    } else if (tag == "e") {
      if (n < 0) throw GraphError(location(line_no) + "edge before problem line");
      long long i = 0, j = 0;
      if (!(ls >> i >> j)) throw GraphError(location(line_no) + "malformed edge line");
      if (i < 1 || j < 1 || i > n || j > n)
        throw GraphError(location(line_no) + "endpoint outside 1.." + std::to_string(n));
      if (i == j) throw GraphError(location(line_no) + "self-loop at vertex " + std::to_string(i));
      edges.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1)});
    } else {
      throw GraphError(location(line_no) + "unknown line type '" + tag + "'");
    }
  }
  if (n < 0) throw GraphError("missing problem line");
  result.graph = Graph(n, edges);
  if (static_cast<long long>(result.graph.num_edges()) != declared_m) {
    result.warnings.push_back("problem line declares " + std::to_string(declared_m) +
                              " edges but " + std::to_string(result.graph.num_edges()) +
                              " distinct edges were listed");
  }
  return result;
}

DimacsResult parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

void write_dimacs(std::ostream& out, const Graph& g) {
  if (!g.name().empty()) out << "c " << g.name() << '\n';
  out << "p edge " << g.order() << ' ' << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) out << "e " << e.u + 1 << ' ' << e.v + 1 << '\n';
}

std::string graph_to_json(const Graph& g) {
  nlohmann::ordered_json j;
  j["name"] = g.name();
  j["n"] = g.order();
  auto edges = nlohmann::ordered_json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u + 1, e.v + 1});
  j["edges"] = std::move(edges);
  return j.dump();
}

Graph graph_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw GraphError(std::string("invalid graph JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    throw GraphError("graph JSON needs fields 'n' and 'edges'");
  const int n = j.at("n").get<int>();
  std::vector<Edge> edges;
  for (const auto& pair : j.at("edges")) {
    if (!pair.is_array() || pair.size() != 2) throw GraphError("edge entries must be [i, j]");
    const int i = pair[0].get<int>();
    const int k = pair[1].get<int>();
    if (i < 1 || k < 1 || i > n || k > n) throw GraphError("edge endpoint out of range");
    edges.push_back({i - 1, k - 1});
  }
  return Graph(n, edges, j.value("name", std::string{}));
}

Graph read_graph_file(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open " + path.string());
  Graph g;
  if (path.extension() == ".json") {
    std::stringstream buffer;
    buffer << in.rdbuf();
    g = graph_from_json(buffer.str());
  } else {
    DimacsResult r = parse_dimacs(in);
    if (warnings)
      for (auto& w : r.warnings) warnings->push_back(path.string() + ": " + w);
    g = std::move(r.graph);
  }
  if (g.name().empty()) g.set_name(path.stem().string());
  return g;
}

}  // namespace exactsub
