#include "gladst/tudataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string_view>

#include "gladst/error.hpp"

namespace gladst {
namespace {

namespace fs = std::filesystem;

struct LinedFile {
  std::string path;
  std::vector<std::string> lines;
};

LinedFile read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open required file " + path.string());
  LinedFile f{path.string(), {}};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    f.lines.push_back(std::move(line));
  }
  while (!f.lines.empty() && f.lines.back().find_first_not_of(" \t") == std::string::npos) {
    f.lines.pop_back();
  }
  return f;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void bad_value(const LinedFile& f, std::size_t line_no, std::string_view what) {
  throw ParseError(f.path + ":" + std::to_string(line_no + 1) + ": cannot parse " +
                   std::string(what) + " from '" + f.lines[line_no] + "'");
}

long long parse_int(const LinedFile& f, std::size_t line_no, std::string_view field) {
  long long v = 0;
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) bad_value(f, line_no, "integer");
  return v;
}

double parse_real(const LinedFile& f, std::size_t line_no, std::string_view field) {
  double v = 0;
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) bad_value(f, line_no, "real");
  return v;
}

std::vector<long long> parse_int_column(const LinedFile& f) {
  std::vector<long long> out;
  out.reserve(f.lines.size());
  for (std::size_t i = 0; i < f.lines.size(); ++i) out.push_back(parse_int(f, i, trim(f.lines[i])));
  return out;
}

fs::path part(const fs::path& dir, const std::string& name, std::string_view suffix) {
  return dir / (name + "_" + std::string(suffix) + ".txt");
}

std::vector<int> remap_graph_labels(const std::vector<long long>& raw, const std::string& path) {
  const std::set<long long> distinct(raw.begin(), raw.end());
  if (distinct.size() > 2) {
    throw UnsupportedDatasetError(path + ": " + std::to_string(distinct.size()) +
                                  " distinct graph labels; only binary datasets are supported");
  }
  const bool already_binary =
      std::all_of(distinct.begin(), distinct.end(), [](long long v) { return v == 0 || v == 1; });
  std::vector<int> out;
  out.reserve(raw.size());
  for (auto v : raw) {
    if (already_binary) {
      out.push_back(static_cast<int>(v));
    } else {
      out.push_back(v == *distinct.begin() ? 0 : 1);
    }
  }
  return out;
}

}  // namespace

GraphDataset parse_tudataset(const fs::path& dir, const std::string& name, int anomaly_label,
                             ParseStats* stats) {
  if (anomaly_label != 0 && anomaly_label != 1) {
    throw ConfigError("anomaly label must be 0 or 1, got " + std::to_string(anomaly_label));
  }
  if (!fs::is_directory(dir)) throw ParseError("dataset directory not found: " + dir.string());

  const auto edges_file = read_lines(part(dir, name, "A"));
  const auto indicator_file = read_lines(part(dir, name, "graph_indicator"));
  const auto labels_file = read_lines(part(dir, name, "graph_labels"));

  const auto indicator = parse_int_column(indicator_file);
  const auto labels = remap_graph_labels(parse_int_column(labels_file), labels_file.path);
  const std::size_t graph_count = labels.size();
  const std::size_t total_nodes = indicator.size();

  // Local index of every global node within its graph.
  std::vector<std::size_t> graph_of(total_nodes), local_of(total_nodes);
  std::vector<std::size_t> sizes(graph_count, 0);
  for (std::size_t k = 0; k < total_nodes; ++k) {
    const long long gid = indicator[k];
    if (gid < 1 || static_cast<std::size_t>(gid) > graph_count) {
      throw IntegrityError(indicator_file.path + ":" + std::to_string(k + 1) + ": graph id " +
                           std::to_string(gid) + " outside 1.." + std::to_string(graph_count));
    }
    graph_of[k] = static_cast<std::size_t>(gid - 1);
    local_of[k] = sizes[graph_of[k]]++;
  }
  for (std::size_t g = 0; g < graph_count; ++g) {
    if (sizes[g] == 0) {
      throw IntegrityError(indicator_file.path + ": graph " + std::to_string(g + 1) + " has no nodes");
    }
  }

  // Directed entries per graph keyed by canonical pair; bit 1 = u→v seen, bit 2 = v→u seen.
  std::vector<std::map<std::pair<int, int>, int>> directed(graph_count);
  ParseStats local_stats;
  for (std::size_t line = 0; line < edges_file.lines.size(); ++line) {
    const auto fields = split_fields(edges_file.lines[line]);
    if (fields.size() != 2) bad_value(edges_file, line, "edge pair");
    const long long a = parse_int(edges_file, line, fields[0]);
    const long long b = parse_int(edges_file, line, fields[1]);
    for (long long id : {a, b}) {
      if (id < 1 || static_cast<std::size_t>(id) > total_nodes) {
        throw IntegrityError(edges_file.path + ":" + std::to_string(line + 1) + ": node " +
                             std::to_string(id) + " outside 1.." + std::to_string(total_nodes));
      }
    }
    const auto ga = graph_of[a - 1];
    if (graph_of[b - 1] != ga) {
      throw IntegrityError(edges_file.path + ":" + std::to_string(line + 1) + ": edge joins node " +
                           std::to_string(a) + " of graph " + std::to_string(ga + 1) + " and node " +
                           std::to_string(b) + " of graph " + std::to_string(graph_of[b - 1] + 1));
    }
    const int u = static_cast<int>(local_of[a - 1]);
    const int v = static_cast<int>(local_of[b - 1]);
    if (u == v) {
      ++local_stats.self_loops;
      continue;
    }
    directed[ga][{std::min(u, v), std::max(u, v)}] |= (u < v ? 1 : 2);
  }

  // Features: attributes, else one-hot node labels, else degree.
  std::vector<Matrix> features(graph_count);
  std::size_t feature_dim = 1;
  if (fs::exists(part(dir, name, "node_attributes"))) {
    const auto attr_file = read_lines(part(dir, name, "node_attributes"));
    if (attr_file.lines.size() != total_nodes) {
      throw IntegrityError(attr_file.path + ": " + std::to_string(attr_file.lines.size()) +
                           " rows for " + std::to_string(total_nodes) + " nodes");
    }
    for (std::size_t k = 0; k < total_nodes; ++k) {
      const auto fields = split_fields(attr_file.lines[k]);
      if (k == 0) feature_dim = fields.size();
      if (fields.size() != feature_dim) {
        throw IntegrityError(attr_file.path + ":" + std::to_string(k + 1) + ": expected " +
                             std::to_string(feature_dim) + " attributes, found " +
                             std::to_string(fields.size()));
      }
      auto& m = features[graph_of[k]];
      if (m.size() == 0) m = Matrix(static_cast<Index>(sizes[graph_of[k]]), static_cast<Index>(feature_dim));
      for (std::size_t c = 0; c < feature_dim; ++c) {
        m(static_cast<Index>(local_of[k]), static_cast<Index>(c)) = parse_real(attr_file, k, fields[c]);
      }
    }
  } else if (fs::exists(part(dir, name, "node_labels"))) {
    const auto nl_file = read_lines(part(dir, name, "node_labels"));
    if (nl_file.lines.size() != total_nodes) {
      throw IntegrityError(nl_file.path + ": " + std::to_string(nl_file.lines.size()) +
                           " rows for " + std::to_string(total_nodes) + " nodes");
    }
    const auto node_labels = parse_int_column(nl_file);
    const std::set<long long> distinct(node_labels.begin(), node_labels.end());
    const std::vector<long long> sorted(distinct.begin(), distinct.end());
    feature_dim = sorted.size();
    for (std::size_t g = 0; g < graph_count; ++g) {
      features[g] = Matrix::Zero(static_cast<Index>(sizes[g]), static_cast<Index>(feature_dim));
    }
    for (std::size_t k = 0; k < total_nodes; ++k) {
      const auto col = std::lower_bound(sorted.begin(), sorted.end(), node_labels[k]) - sorted.begin();
      features[graph_of[k]](static_cast<Index>(local_of[k]), col) = 1.0;
    }
  }

  GraphDataset ds;
  ds.name = name;
  ds.feature_dim = feature_dim;
  ds.anomaly_label = anomaly_label;
  ds.graphs.reserve(graph_count);
  for (std::size_t g = 0; g < graph_count; ++g) {
    std::vector<Edge> edges;
    edges.reserve(directed[g].size());
    for (const auto& [pair, seen] : directed[g]) {
      if (seen != 3) ++local_stats.asymmetric_edges;
      edges.push_back({pair.first, pair.second});
    }
    Matrix x = features[g].size() ? std::move(features[g]) : degree_features(sizes[g], edges);
    ds.graphs.push_back(std::make_shared<const Graph>(
        Graph::make(sizes[g], std::move(edges), std::move(x), labels[g])));
  }
  if (stats) *stats = local_stats;
  return ds;
}

void write_tudataset(const GraphDataset& dataset, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());

  auto open = [&](std::string_view suffix) {
    const auto path = part(dir, dataset.name, suffix);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
  };
  auto a_out = open("A");
  auto ind_out = open("graph_indicator");
  auto lab_out = open("graph_labels");
  auto attr_out = open("node_attributes");

  char buf[32];
  std::size_t offset = 1;
  for (std::size_t g = 0; g < dataset.size(); ++g) {
    const Graph& graph = dataset[g];
    std::vector<std::pair<int, int>> entries;
    entries.reserve(graph.edges().size() * 2);
    for (const auto& e : graph.edges()) {
      entries.emplace_back(e.u, e.v);
      entries.emplace_back(e.v, e.u);
    }
    std::sort(entries.begin(), entries.end());
    for (const auto& [u, v] : entries) a_out << offset + u << ", " << offset + v << '\n';
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
      ind_out << g + 1 << '\n';
      for (Index c = 0; c < graph.features().cols(); ++c) {
        std::snprintf(buf, sizeof buf, "%.17g", graph.features()(static_cast<Index>(i), c));
        attr_out << (c ? ", " : "") << buf;
      }
      attr_out << '\n';
    }
    lab_out << graph.label() << '\n';
    offset += graph.node_count();
  }
  for (auto* s : {&a_out, &ind_out, &lab_out, &attr_out}) {
    s->flush();
    if (!*s) throw IoError("write failed in " + dir.string());
  }
}

}  // namespace gladst
