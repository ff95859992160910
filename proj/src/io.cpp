#include "lpk/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace lpk {

namespace {

[[noreturn]] void fail(const std::string& what, const std::string& path) {
  throw std::runtime_error(what + ": " + path);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open for writing", path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open for reading", path);
  return in;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) fail("write failed", path);
}

double parse_double(const std::string& tok, const std::string& path) {
  double x = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto res = std::from_chars(first, last, x);
  if (res.ec != std::errc{} || res.ptr != last) fail("malformed number '" + tok + "'", path);
  return x;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string fmt_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_signal_csv(const std::string& path, const SampledSignal& f) {
  std::ofstream out = open_out(path);
  out << "# T=" << fmt_double(f.grid.period) << " N=" << f.grid.size << "\n";
  out << "index,real,imag\n";
  for (std::size_t j = 0; j < f.values.size(); ++j)
    out << j << ',' << fmt_double(f.values[j].real()) << ',' << fmt_double(f.values[j].imag())
        << "\n";
  finish(out, path);
}

SampledSignal read_signal_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# T=", 0) != 0)
    fail("missing '# T=... N=...' header", path);
  std::istringstream hdr(line.substr(2));
  std::string t_tok, n_tok;
  hdr >> t_tok >> n_tok;
  if (t_tok.rfind("T=", 0) != 0 || n_tok.rfind("N=", 0) != 0)
    fail("missing '# T=... N=...' header", path);
  const double period = parse_double(t_tok.substr(2), path);
  const int size = int(parse_double(n_tok.substr(2), path));
  SampledSignal f{make_grid(period, size), {}};
  f.values.reserve(std::size_t(size));
  if (!std::getline(in, line) || line != "index,real,imag") fail("missing column header", path);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto toks = split_csv(line);
    if (toks.size() != 3) fail("expected 3 columns, got line '" + line + "'", path);
    if (int(parse_double(toks[0], path)) != int(f.values.size()))
      fail("non-consecutive sample index in line '" + line + "'", path);
    f.values.push_back(cplx{parse_double(toks[1], path), parse_double(toks[2], path)});
  }
  if (int(f.values.size()) != size)
    fail("row count " + std::to_string(f.values.size()) + " does not match N=" +
             std::to_string(size),
         path);
  return f;
}

void write_vector_csv(const std::string& path, const VectorSignal& f) {
  std::ofstream out = open_out(path);
  out << "# T=" << fmt_double(f.grid.period) << " N=" << f.grid.size
      << " components=" << f.comps.size() << "\n";
  out << "component,index,real,imag\n";
  for (const auto& [key, sig] : f.comps)
    for (std::size_t j = 0; j < sig.values.size(); ++j)
      out << key.str() << ',' << j << ',' << fmt_double(sig.values[j].real()) << ','
          << fmt_double(sig.values[j].imag()) << "\n";
  finish(out, path);
}

IntervalFamily read_interval_family(const std::string& path) {
  std::ifstream in = open_in(path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("invalid JSON (") + e.what() + ")", path);
  }
  if (!doc.is_array()) fail("expected a JSON array of {\"a\",\"b\"} objects", path);
  IntervalFamily fam;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("a") || !item.contains("b") ||
        !item["a"].is_number() || !item["b"].is_number())
      fail("expected objects with numeric \"a\" and \"b\", got " + item.dump(), path);
    fam.intervals.push_back(Interval{item["a"].get<double>(), item["b"].get<double>()});
  }
  validate_family(fam);
  return fam;
}

void write_interval_family(const std::string& path, const IntervalFamily& fam) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const Interval& iv : fam.intervals)
    doc.push_back(nlohmann::ordered_json{{"a", iv.a}, {"b", iv.b}});
  std::ofstream out = open_out(path);
  out << doc.dump(2) << "\n";
  finish(out, path);
}

void write_cover_csv(const std::string& path, const Cover& cover) {
  std::ofstream out = open_out(path);
  out << "# A=" << fmt_double(cover.A) << " D=" << cover.D << " v_min=" << cover.v_min << "\n";
  out << "m,v,k,j,a_mv,delta,class\n";
  for (const CoverRow& row : cover.rows)
    out << row.m << ',' << row.v << ',' << row.k << ',' << row.j << ',' << fmt_double(row.a_mv)
        << ',' << fmt_double(row.delta) << ',' << row.cls << "\n";
  finish(out, path);
}

void write_profile_csv(const std::string& path, const MaximalProfile& prof) {
  std::ofstream out = open_out(path);
  out << "# i=" << prof.i << " p=" << fmt_double(prof.p) << " s=" << fmt_double(prof.s)
      << " variant=" << (prof.variant == MaximalVariant::Containing ? "containing" : "centered")
      << " l2_surrogate=" << (prof.l2_surrogate ? 1 : 0) << "\n";
  out << "index,x,value\n";
  for (std::size_t j = 0; j < prof.values.size(); ++j)
    out << j << ',' << fmt_double(prof.grid.spacing() * double(j)) << ','
        << fmt_double(prof.values[j]) << "\n";
  finish(out, path);
}

}  // namespace lpk
