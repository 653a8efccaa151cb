#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace tmc::graph_io {

enum class AttrType { string, integer, real };

struct AttrKey {
  std::string name;
  AttrType type;
};

struct Element {
  std::string id;
  std::string source, target;      // edges only
  std::vector<std::string> values;  // one per declared key, already formatted
};

// Undirected attributed graph, ready for serialization.
struct Document {
  std::vector<AttrKey> node_keys;
  std::vector<AttrKey> edge_keys;
  std::vector<Element> nodes;
  std::vector<Element> edges;
};

std::string xml_escape(std::string_view s);

void write_graphml(std::ostream& out, const Document& doc);
void write_gexf(std::ostream& out, const Document& doc);
// Dispatches on extension: .gexf writes GEXF, anything else GraphML.
void write_graph_file(const std::filesystem::path& path, const Document& doc);

}  // namespace tmc::graph_io
