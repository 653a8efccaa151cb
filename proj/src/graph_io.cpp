#include "tmc/graph_io.hpp"

#include <fstream>

#include "tmc/error.hpp"

namespace tmc::graph_io {

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

namespace {

const char* type_name(AttrType t) {
  switch (t) {
    case AttrType::string: return "string";
    case AttrType::integer: return "long";
    case AttrType::real: return "double";
  }
  return "string";
}

void check(const Document& doc) {
  for (const auto& n : doc.nodes)
    if (n.values.size() != doc.node_keys.size()) throw std::logic_error("node attribute count mismatch");
  for (const auto& e : doc.edges)
    if (e.values.size() != doc.edge_keys.size()) throw std::logic_error("edge attribute count mismatch");
}

}  // namespace

void write_graphml(std::ostream& out, const Document& doc) {
  check(doc);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
         "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
         "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
         "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n";
  for (std::size_t i = 0; i < doc.node_keys.size(); ++i)
    out << "  <key id=\"n" << i << "\" for=\"node\" attr.name=\"" << xml_escape(doc.node_keys[i].name)
        << "\" attr.type=\"" << type_name(doc.node_keys[i].type) << "\"/>\n";
  for (std::size_t i = 0; i < doc.edge_keys.size(); ++i)
    out << "  <key id=\"e" << i << "\" for=\"edge\" attr.name=\"" << xml_escape(doc.edge_keys[i].name)
        << "\" attr.type=\"" << type_name(doc.edge_keys[i].type) << "\"/>\n";
  out << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  for (const auto& n : doc.nodes) {
    out << "    <node id=\"" << xml_escape(n.id) << "\">\n";
    for (std::size_t i = 0; i < n.values.size(); ++i)
      out << "      <data key=\"n" << i << "\">" << xml_escape(n.values[i]) << "</data>\n";
    out << "    </node>\n";
  }
  for (const auto& e : doc.edges) {
    out << "    <edge id=\"" << xml_escape(e.id) << "\" source=\"" << xml_escape(e.source) << "\" target=\""
        << xml_escape(e.target) << "\">\n";
    for (std::size_t i = 0; i < e.values.size(); ++i)
      out << "      <data key=\"e" << i << "\">" << xml_escape(e.values[i]) << "</data>\n";
    out << "    </edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

void write_gexf(std::ostream& out, const Document& doc) {
  check(doc);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<gexf xmlns=\"http://www.gexf.net/1.2draft\" version=\"1.2\">\n"
      << "  <graph mode=\"static\" defaultedgetype=\"undirected\">\n";
  auto declare = [&](const char* cls, const std::vector<AttrKey>& keys) {
    if (keys.empty()) return;
    out << "    <attributes class=\"" << cls << "\">\n";
    for (std::size_t i = 0; i < keys.size(); ++i)
      out << "      <attribute id=\"" << i << "\" title=\"" << xml_escape(keys[i].name) << "\" type=\""
          << type_name(keys[i].type) << "\"/>\n";
    out << "    </attributes>\n";
  };
  declare("node", doc.node_keys);
  declare("edge", doc.edge_keys);
  auto attvalues = [&](const std::vector<std::string>& values) {
    if (values.empty()) return;
    out << "        <attvalues>\n";
    for (std::size_t i = 0; i < values.size(); ++i)
      out << "          <attvalue for=\"" << i << "\" value=\"" << xml_escape(values[i]) << "\"/>\n";
    out << "        </attvalues>\n";
  };

  out << "    <nodes>\n";
  for (const auto& n : doc.nodes) {
    out << "      <node id=\"" << xml_escape(n.id) << "\" label=\"" << xml_escape(n.id) << "\">\n";
    attvalues(n.values);
    out << "      </node>\n";
  }
  out << "    </nodes>\n    <edges>\n";
  for (const auto& e : doc.edges) {
    out << "      <edge id=\"" << xml_escape(e.id) << "\" source=\"" << xml_escape(e.source) << "\" target=\""
        << xml_escape(e.target) << "\">\n";
    attvalues(e.values);
    out << "      </edge>\n";
  }
  out << "    </edges>\n  </graph>\n</gexf>\n";
}

void write_graph_file(const std::filesystem::path& path, const Document& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  if (path.extension() == ".gexf")
    write_gexf(out, doc);
  else
    write_graphml(out, doc);
}

}  // namespace tmc::graph_io
