#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lltorus/config.hpp"
#include "lltorus/elliptic.hpp"
#include "lltorus/errors.hpp"
#include "lltorus/scattering.hpp"

namespace lltorus {

// Numeric CSV with one header row.  Values are written in the shortest
// round-trip form, so equal inputs give byte-identical files.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t column(const std::string& name) const;  // Io if missing
};
CsvTable read_csv(const std::string& path);
void write_csv(std::ostream& os, const CsvTable& table);
void write_csv(const std::string& path, const CsvTable& table);
std::string format_number(double v);

// Columns x, L1, L2, L3.
SpinField read_spin_field(const std::string& path);
void write_spin_field(const std::string& path, const SpinField& field);

// Columns re_lambda, im_lambda, re_a, im_a, re_b, im_b, re_r, im_r on the
// Gamma1 nodes followed by the Gamma2 nodes.
void write_scattering(const std::string& path, const ScatteringData& d);
// Rebuilds the grid from the row count and checks the nodes against it.
ScatteringData read_scattering(const std::string& path, const Torus& T);

struct ExperimentConfig {
  AnisotropyParams params = AnisotropyParams::from_modulus(0.5);
  struct Reflection {
    std::string source = "synthetic";  // synthetic | field | scattering
    double c = 0.5, s = 1.0;
    std::string path;  // field CSV or scattering CSV
    int nodes = 1024;  // contour nodes per line for the field source
  } reflection;
  double kappa = 1.0;
  std::pair<double, double> kappa_window{0.5, 2.0};
  std::vector<double> t_list;
  std::vector<std::pair<double, double>> points;  // (x, t)
  struct Grid {
    int nodes = 0;  // 0 resolves the mesh per point
    double points_per_wavelength = 3.0;
    double x_max = 12.0;
    double dx = 0.1;
    double pde_dx = 0.1;
  } grid;
  Tolerances tolerances;
  struct Output {
    std::string csv, summary;
  } output;
  unsigned seed = 1;
};

// Strict parse: unknown keys, wrong types and non-positive tolerances raise Config.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

// {"error": kind, "module": ..., "message": ..., "context": {...}}
std::string error_json(const Error& e);

}  // namespace lltorus
