#include "tneat/genome_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tneat/error.hpp"
#include "tneat/text.hpp"

namespace tneat {

namespace {

constexpr std::string_view kMagic = "tneat-genome";
constexpr const char* kNodeFields[kNodeWidth] = {"key", "bias", "response", "aggregation",
                                                 "activation"};
constexpr const char* kConnFields[kConnWidth] = {"in_key", "out_key", "enabled", "weight"};

void append_row(std::string& out, std::span<const double> row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ' ';
    out += std::isnan(row[i]) ? std::string("null") : text::format_double(row[i]);
  }
  out += '\n';
}

class Reader {
 public:
  explicit Reader(std::string_view doc) : lines_(text::split_lines(doc)) {}

  // Next non-blank line, trimmed. Throws at end of input.
  std::string_view next(const std::string& expecting) {
    while (pos_ < lines_.size()) {
      auto line = text::trim(lines_[pos_++]);
      if (!line.empty()) return line;
    }
    throw ParseError(pos_ + 1, "", "unexpected end of document, expected " + expecting);
  }

  std::size_t line() const { return pos_; }

  bool at_end() {
    while (pos_ < lines_.size() && text::trim(lines_[pos_]).empty()) ++pos_;
    return pos_ >= lines_.size();
  }

 private:
  std::vector<std::string_view> lines_;
  std::size_t pos_ = 0;
};

long long header_value(Reader& reader, std::string_view name) {
  auto line = reader.next(std::string(name));
  auto tokens = text::split_ws(line);
  if (tokens.size() != 2 || tokens[0] != name) {
    throw ParseError(reader.line(), std::string(name), "expected '" + std::string(name) + " <n>'");
  }
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tokens[1].data(), tokens[1].data() + tokens[1].size(), v);
  if (ec != std::errc() || ptr != tokens[1].data() + tokens[1].size() || v < 0) {
    throw ParseError(reader.line(), std::string(name), "expected a non-negative integer");
  }
  return v;
}

void expect_keyword(Reader& reader, std::string_view word) {
  auto line = reader.next(std::string(word));
  if (line != word) {
    throw ParseError(reader.line(), "", "expected '" + std::string(word) + "'");
  }
}

std::size_t read_row(Reader& reader, std::span<double> dest, const char* const* names,
                     const std::string& prefix) {
  auto line = reader.next(prefix);
  auto tokens = text::split_ws(line);
  if (tokens.size() != dest.size()) {
    throw ParseError(reader.line(), prefix,
                     "expected " + std::to_string(dest.size()) + " values, got " +
                         std::to_string(tokens.size()));
  }
  for (std::size_t i = 0; i < dest.size(); ++i) {
    if (tokens[i] == "null") {
      dest[i] = kNaN;
      continue;
    }
    auto v = text::parse_double(tokens[i]);
    if (!v || std::isnan(*v)) {
      throw ParseError(reader.line(), prefix + "." + names[i],
                       "invalid number '" + std::string(tokens[i]) + "'");
    }
    dest[i] = *v;
  }
  return reader.line();
}

}  // namespace

std::string serialize_genome(GenomeView g) {
  std::string out;
  out += std::string(kMagic) + " 1\n";
  out += "inputs " + std::to_string(g.num_inputs()) + "\n";
  out += "outputs " + std::to_string(g.num_outputs()) + "\n";
  out += "max_nodes " + std::to_string(g.max_nodes()) + "\n";
  out += "max_conns " + std::to_string(g.max_conns()) + "\n";
  out += "nodes\n";
  for (std::size_t r = 0; r < g.max_nodes(); ++r) append_row(out, g.node_span(r));
  out += "conns\n";
  for (std::size_t r = 0; r < g.max_conns(); ++r) append_row(out, g.conn_span(r));
  out += "end\n";
  return out;
}

GenomeTensors parse_genome(std::string_view document) {
  Reader reader(document);
  {
    auto line = reader.next("header");
    auto tokens = text::split_ws(line);
    if (tokens.size() != 2 || tokens[0] != kMagic || tokens[1] != "1") {
      throw ParseError(reader.line(), "", "expected 'tneat-genome 1'");
    }
  }
  const long long inputs = header_value(reader, "inputs");
  const long long outputs = header_value(reader, "outputs");
  const long long max_nodes = header_value(reader, "max_nodes");
  const long long max_conns = header_value(reader, "max_conns");
  if (inputs < 1 || outputs < 1) throw ParseError(reader.line(), "", "inputs/outputs must be >= 1");
  if (max_nodes < inputs + outputs || max_nodes > 100000 || max_conns > 1000000) {
    throw ParseError(reader.line(), "max_nodes", "capacity out of range");
  }

  GenomeTensors g(static_cast<int>(inputs), static_cast<int>(outputs),
                  static_cast<std::size_t>(max_nodes), static_cast<std::size_t>(max_conns));
  expect_keyword(reader, "nodes");
  for (std::size_t r = 0; r < g.max_nodes(); ++r) {
    read_row(reader, g.node_data_mut().subspan(r * kNodeWidth, kNodeWidth), kNodeFields,
             "nodes[" + std::to_string(r) + "]");
  }
  expect_keyword(reader, "conns");
  std::vector<std::size_t> conn_lines(g.max_conns());
  for (std::size_t r = 0; r < g.max_conns(); ++r) {
    conn_lines[r] = read_row(reader, g.conn_data_mut().subspan(r * kConnWidth, kConnWidth),
                             kConnFields, "conns[" + std::to_string(r) + "]");
  }
  expect_keyword(reader, "end");
  const std::size_t end_line = reader.line();
  if (!reader.at_end()) throw ParseError(end_line + 1, "", "trailing content after 'end'");

  for (std::size_t r = 0; r < g.max_conns(); ++r) {
    auto exact_key = [](double v) {
      return std::isfinite(v) && v == std::floor(v) && v >= 0.0 && v < 0x1p53;
    };
    if (!exact_key(g.conn(r, conn_col::in)) || !exact_key(g.conn(r, conn_col::out))) continue;
    const std::string prefix = "conns[" + std::to_string(r) + "]";
    if (!g.find_node(g.conn_in(r))) {
      throw ParseError(conn_lines[r], prefix + ".in_key",
                       "no live node with key " + std::to_string(g.conn_in(r)));
    }
    if (!g.find_node(g.conn_out(r))) {
      throw ParseError(conn_lines[r], prefix + ".out_key",
                       "no live node with key " + std::to_string(g.conn_out(r)));
    }
  }

  auto problems = integrity_violations(g);
  if (!problems.empty()) throw ParseError(end_line, "", problems.front());
  return g;
}

GenomeTensors load_genome(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open genome file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_genome(buffer.str());
}

void save_genome(const std::filesystem::path& path, GenomeView genome) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write genome file '" + path.string() + "'");
  out << serialize_genome(genome);
}

}  // namespace tneat
