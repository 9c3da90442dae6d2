#include "lltorus/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace lltorus {

namespace {
using json = nlohmann::json;

Error io_error(const std::string& what, const std::string& path) {
  return Error(ErrorKind::Io, "cli_runner", what).with("path", path);
}

Error config_error(const std::string& what, const std::string& key) {
  return Error(ErrorKind::Config, "cli_runner", what).with("key", key);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

void require_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw config_error("expected an object", where);
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw config_error("unknown key", where.empty() ? key : where + "." + key);
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw config_error("expected a number", key);
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw config_error("expected a finite number", key);
  return d;
}

double positive(const json& v, const std::string& key) {
  const double d = number(v, key);
  if (!(d > 0)) throw config_error("expected a positive number", key);
  return d;
}

int positive_int(const json& v, const std::string& key, bool allow_zero = false) {
  if (!v.is_number_integer()) throw config_error("expected an integer", key);
  const long long n = v.get<long long>();
  if (n < (allow_zero ? 0 : 1) || n > (1ll << 30)) throw config_error("integer out of range", key);
  return int(n);
}

std::string text(const json& v, const std::string& key) {
  if (!v.is_string()) throw config_error("expected a string", key);
  return v.get<std::string>();
}

void parse_tolerances(const json& obj, Tolerances& t) {
  const std::vector<std::pair<std::string, double*>> fields{
      {"guard_radius", &t.guard_radius},   {"det_floor", &t.det_floor},
      {"tail_eps", &t.tail_eps},           {"unit_norm", &t.unit_norm},
      {"theta_series", &t.theta_series},   {"jost_rtol", &t.jost_rtol},
      {"jost_atol", &t.jost_atol},         {"jost_min_step", &t.jost_min_step},
      {"symmetrize_floor", &t.symmetrize_floor}, {"exponent_cap", &t.exponent_cap},
      {"sie_residual", &t.sie_residual},   {"norm_check", &t.norm_check},
      {"contour_density", &t.contour_density}};
  std::set<std::string> allowed;
  for (const auto& f : fields) allowed.insert(f.first);
  require_keys(obj, allowed, "tolerances");
  for (const auto& [name, ptr] : fields)
    if (obj.contains(name)) *ptr = positive(obj.at(name), "tolerances." + name);
}
}  // namespace

std::string format_number(double v) {
  // shortest representation that reads back to the same double
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw Error(ErrorKind::Io, "cli_runner", "missing CSV column").with("column", name);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open CSV file", path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw io_error("empty CSV file", path);
  t.header = split(line);
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size())
      throw io_error("CSV row has the wrong number of columns", path).with("line", double(lineno));
    std::vector<double> row;
    for (const auto& c : cells) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(c, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != c.size() || c.empty())
        throw io_error("CSV cell is not a number", path).with("line", double(lineno)).with("cell", c);
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_csv(std::ostream& os, const CsvTable& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write CSV file", path);
  write_csv(out, table);
  if (!out) throw io_error("write failed", path);
}

SpinField read_spin_field(const std::string& path) {
  const CsvTable t = read_csv(path);
  const std::size_t cx = t.column("x"), c1 = t.column("L1"), c2 = t.column("L2"), c3 = t.column("L3");
  std::vector<double> x;
  std::vector<Vec3> L;
  for (const auto& row : t.rows) {
    x.push_back(row[cx]);
    L.emplace_back(row[c1], row[c2], row[c3]);
  }
  if (x.size() < 4) throw io_error("spin field needs at least four samples", path);
  const double dx = x[1] - x[0];
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(std::abs(x[i] - x[i - 1] - dx) <= 1e-9 * std::max(1.0, std::abs(x[i]))) || !(dx > 0))
      throw io_error("spin field samples must be uniform and increasing", path).with("x", x[i]);
  return SpinField::from_samples(std::move(x), std::move(L));
}

void write_spin_field(const std::string& path, const SpinField& field) {
  CsvTable t;
  t.header = {"x", "L1", "L2", "L3"};
  for (std::size_t i = 0; i < field.x().size(); ++i) {
    const Vec3& v = field.L()[i];
    t.rows.push_back({field.x()[i], v(0), v(1), v(2)});
  }
  write_csv(path, t);
}

void write_scattering(const std::string& path, const ScatteringData& d) {
  CsvTable t;
  t.header = {"re_lambda", "im_lambda", "re_a", "im_a", "re_b", "im_b", "re_r", "im_r"};
  for (std::size_t j = 0; j < d.grid.nodes.size(); ++j) {
    const cplx r = j < d.r.size() ? d.r[j] : cplx(0.0);
    t.rows.push_back({d.grid.nodes[j].real(), d.grid.nodes[j].imag(), d.a[j].real(), d.a[j].imag(), d.b[j].real(),
                      d.b[j].imag(), r.real(), r.imag()});
  }
  write_csv(path, t);
}

ScatteringData read_scattering(const std::string& path, const Torus& T) {
  const CsvTable t = read_csv(path);
  if (t.rows.size() < 4 || t.rows.size() % 2) throw io_error("scattering CSV needs an even number of nodes", path);
  ScatteringData d;
  d.grid = ContourGrid::make(T, int(t.rows.size() / 2));
  const std::size_t cl = t.column("re_lambda"), ci = t.column("im_lambda");
  const std::size_t ca = t.column("re_a"), cai = t.column("im_a"), cb = t.column("re_b"), cbi = t.column("im_b");
  const std::size_t cr = t.column("re_r"), cri = t.column("im_r");
  for (std::size_t j = 0; j < t.rows.size(); ++j) {
    const auto& row = t.rows[j];
    if (std::abs(cplx(row[cl], row[ci]) - d.grid.nodes[j]) > 1e-9)
      throw io_error("scattering CSV nodes do not match the contour grid for these parameters", path)
          .with("row", double(j));
    d.a.emplace_back(row[ca], row[cai]);
    d.b.emplace_back(row[cb], row[cbi]);
    d.r.emplace_back(row[cr], row[cri]);
  }
  return d;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, "cli_runner", "config is not valid JSON").with("detail", std::string(e.what()));
  }
  require_keys(j, {"params", "reflection", "kappa", "kappa_window", "t_list", "points", "grid", "tolerances", "output", "seed"},
               "");
  ExperimentConfig c;
  if (j.contains("params")) {
    const json& p = j.at("params");
    require_keys(p, {"k", "rho", "J"}, "params");
    if (p.contains("J")) {
      if (p.contains("k") || p.contains("rho")) throw config_error("give either J or (k, rho)", "params");
      const json& J = p.at("J");
      if (!J.is_array() || J.size() != 3) throw config_error("J must be an array of three numbers", "params.J");
      const double J1 = number(J[0], "params.J"), J2 = number(J[1], "params.J"), J3 = number(J[2], "params.J");
      if (!(J1 < J2 && J2 < J3)) throw config_error("J1 < J2 < J3 is required", "params.J");
      c.params = AnisotropyParams::from_J(J1, J2, J3);
    } else {
      const double k = p.contains("k") ? number(p.at("k"), "params.k") : 0.5;
      const double rho = p.contains("rho") ? positive(p.at("rho"), "params.rho") : 1.0;
      if (!(k > 0 && k < 1)) throw config_error("modulus must lie in (0, 1)", "params.k");
      c.params = AnisotropyParams::from_modulus(k, rho);
    }
  }
  if (j.contains("reflection")) {
    const json& r = j.at("reflection");
    require_keys(r, {"source", "c", "s", "path", "nodes"}, "reflection");
    if (r.contains("source")) c.reflection.source = text(r.at("source"), "reflection.source");
    if (c.reflection.source != "synthetic" && c.reflection.source != "field" && c.reflection.source != "scattering")
      throw config_error("source must be synthetic, field or scattering", "reflection.source");
    if (r.contains("c")) c.reflection.c = number(r.at("c"), "reflection.c");
    if (r.contains("s")) c.reflection.s = positive(r.at("s"), "reflection.s");
    if (r.contains("path")) c.reflection.path = text(r.at("path"), "reflection.path");
    if (r.contains("nodes")) c.reflection.nodes = positive_int(r.at("nodes"), "reflection.nodes");
    if (c.reflection.source != "synthetic" && c.reflection.path.empty())
      throw config_error("this source needs a path", "reflection.path");
  }
  if (j.contains("kappa")) c.kappa = positive(j.at("kappa"), "kappa");
  if (j.contains("kappa_window")) {
    const json& w = j.at("kappa_window");
    if (!w.is_array() || w.size() != 2) throw config_error("kappa_window must be [lo, hi]", "kappa_window");
    c.kappa_window = {positive(w[0], "kappa_window"), positive(w[1], "kappa_window")};
    if (!(c.kappa_window.first <= c.kappa_window.second)) throw config_error("empty window", "kappa_window");
  }
  if (j.contains("t_list")) {
    if (!j.at("t_list").is_array()) throw config_error("expected an array", "t_list");
    for (const auto& t : j.at("t_list")) c.t_list.push_back(positive(t, "t_list"));
  }
  if (j.contains("points")) {
    if (!j.at("points").is_array()) throw config_error("expected an array of [x, t]", "points");
    for (const auto& p : j.at("points")) {
      if (!p.is_array() || p.size() != 2) throw config_error("each point is [x, t]", "points");
      const double t = number(p[1], "points");
      if (t < 0) throw config_error("time must be non-negative", "points");
      c.points.emplace_back(number(p[0], "points"), t);
    }
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    require_keys(g, {"nodes", "points_per_wavelength", "x_max", "dx", "pde_dx"}, "grid");
    if (g.contains("nodes")) c.grid.nodes = positive_int(g.at("nodes"), "grid.nodes", true);
    if (c.grid.nodes % 2) throw config_error("node count must be even", "grid.nodes");
    if (g.contains("points_per_wavelength"))
      c.grid.points_per_wavelength = positive(g.at("points_per_wavelength"), "grid.points_per_wavelength");
    if (g.contains("x_max")) c.grid.x_max = positive(g.at("x_max"), "grid.x_max");
    if (g.contains("dx")) c.grid.dx = positive(g.at("dx"), "grid.dx");
    if (g.contains("pde_dx")) c.grid.pde_dx = positive(g.at("pde_dx"), "grid.pde_dx");
  }
  if (j.contains("tolerances")) parse_tolerances(j.at("tolerances"), c.tolerances);
  if (j.contains("output")) {
    const json& o = j.at("output");
    require_keys(o, {"csv", "summary"}, "output");
    if (o.contains("csv")) c.output.csv = text(o.at("csv"), "output.csv");
    if (o.contains("summary")) c.output.summary = text(o.at("summary"), "output.summary");
  }
  if (j.contains("seed")) c.seed = unsigned(positive_int(j.at("seed"), "seed", true));
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cli_runner", "cannot open config file").with("path", path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string error_json(const Error& e) {
  json j;
  j["error"] = to_string(e.kind());
  j["module"] = e.module();
  j["message"] = e.what();
  json ctx = json::object();
  for (const auto& [k, v] : e.context()) ctx[k] = v;
  j["context"] = ctx;
  return j.dump();
}

}  // namespace lltorus
