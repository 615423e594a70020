// SPDX-License-Identifier: Apache-2.0
#include "emskin/meta_atom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "emskin/errors.hpp"

namespace emskin {

namespace {

constexpr std::size_t kCsvColumns = 21;

std::array<cd*, 10> fields_of(SusceptibilityTensors& psi, ReflectionTensor& gamma) {
  return {&psi.e_xx, &psi.e_yy, &psi.e_zz, &psi.h_xx, &psi.h_yy,
          &psi.h_zz, &gamma.pp,  &gamma.ps,  &gamma.sp,  &gamma.ss};
}

std::array<const cd*, 10> fields_of(const SusceptibilityTensors& psi, const ReflectionTensor& gamma) {
  return {&psi.e_xx, &psi.e_yy, &psi.e_zz, &psi.h_xx, &psi.h_yy,
          &psi.h_zz, &gamma.pp,  &gamma.ps,  &gamma.sp,  &gamma.ss};
}

constexpr std::array<const char*, 10> kFieldNames{"psi_e_xx", "psi_e_yy", "psi_e_zz", "psi_h_xx",
                                                  "psi_h_yy", "psi_h_zz", "gamma_pp", "gamma_ps",
                                                  "gamma_sp", "gamma_ss"};

std::string csv_header() {
  std::string header = "g";
  for (const char* name : kFieldNames) {
    header += ",re_";
    header += name;
    header += ",im_";
    header += name;
  }
  return header;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

void MetaAtomTable::validate() const {
  require(g.size() >= 2, "meta-atom table needs at least 2 entries");
  require(psi.size() == g.size() && gamma.size() == g.size(),
          "meta-atom table columns have inconsistent lengths");
  for (std::size_t i = 0; i < g.size(); ++i) {
    require(std::isfinite(g[i]), "meta-atom table descriptor is not finite");
    if (i > 0) require(g[i] > g[i - 1], "meta-atom table descriptors must be strictly increasing");
    for (const cd* v : fields_of(psi[i], gamma[i]))
      require(std::isfinite(v->real()) && std::isfinite(v->imag()),
              "meta-atom table value is not finite at row " + std::to_string(i));
  }
}

MetaAtomResponse lookup_response(const MetaAtomTable& table, double g) {
  if (!(g >= table.g_min() && g <= table.g_max())) {
    throw RangeError("descriptor g = " + format_double(g) + " outside table interval [" +
                     format_double(table.g_min()) + ", " + format_double(table.g_max()) + "]");
  }
  const auto upper = std::upper_bound(table.g.begin(), table.g.end(), g);
  std::size_t hi = static_cast<std::size_t>(upper - table.g.begin());
  if (hi == table.size()) return {table.psi.back(), table.gamma.back()};
  const std::size_t lo = hi - 1;
  if (g == table.g[lo]) return {table.psi[lo], table.gamma[lo]};
  const double t = (g - table.g[lo]) / (table.g[hi] - table.g[lo]);
  MetaAtomResponse out;
  const auto a = fields_of(table.psi[lo], table.gamma[lo]);
  const auto b = fields_of(table.psi[hi], table.gamma[hi]);
  const auto dst = fields_of(out.psi, out.gamma);
  for (std::size_t k = 0; k < dst.size(); ++k) {
    *dst[k] = {a[k]->real() + t * (b[k]->real() - a[k]->real()),
               a[k]->imag() + t * (b[k]->imag() - a[k]->imag())};
  }
  return out;
}

MetaAtomTable surrogate_table(const SurrogateParams& p) {
  require(std::isfinite(p.g_min) && std::isfinite(p.g_max) && p.g_min > 0.0 && p.g_min < p.g_max,
          "surrogate range must satisfy 0 < g_min < g_max");
  require(p.resonance_center > p.g_min && p.resonance_center < p.g_max,
          "surrogate resonance_center must lie strictly inside (g_min, g_max)");
  require(p.entries >= 16, "surrogate table needs at least 16 entries");
  require(std::isfinite(p.q_factor) && p.q_factor > 0.0, "surrogate q_factor must be positive");
  require(std::isfinite(p.frequency) && p.frequency > 0.0, "surrogate frequency must be positive");

  const double k0 = PhysicalConstants::at_frequency(p.frequency).k0();
  const double step = (p.g_max - p.g_min) / static_cast<double>(p.entries - 1);
  MetaAtomTable table;
  table.substrate = "surrogate";
  table.frequency = p.frequency;
  for (std::size_t i = 0; i < p.entries; ++i) {
    const double g = i + 1 == p.entries ? p.g_max : p.g_min + step * static_cast<double>(i);
    const double detune = p.q_factor * (g - p.resonance_center) / p.resonance_center;
    // Gamma = -1 exactly at resonance, where psi diverges.
    require(std::abs(detune) > 1e-9, "surrogate resonance_center coincides with a table node");
    const double phase = kPi + 2.0 * std::atan(detune);
    // 4j Gamma / (k (1 + Gamma)) simplifies to 2 (j + 1/detune) / k for |Gamma| = 1.
    const cd psi_t = cd(2.0 / (k0 * detune), 2.0 / k0);
    SusceptibilityTensors psi;
    psi.e_xx = psi_t;
    psi.e_yy = psi_t;
    table.g.push_back(g);
    table.psi.push_back(psi);
    table.gamma.push_back(ReflectionTensor::diagonal(std::polar(1.0, phase)));
  }
  return table;
}

MetaAtomTable read_table_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open meta-atom table: " + path.string());
  MetaAtomTable table;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (text[0] == '#') {
      const auto eq = text.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(text.substr(1, eq - 1));
      const std::string value = trim(text.substr(eq + 1));
      try {
        if (key == "substrate") table.substrate = value;
        else if (key == "thickness") table.thickness = std::stod(value);
        else if (key == "frequency") table.frequency = std::stod(value);
      } catch (const std::exception&) {
        throw ConfigError(where + ": invalid metadata value for " + key);
      }
      continue;
    }
    if (!header_seen) {
      if (text != csv_header()) throw ConfigError(where + ": unexpected meta-atom table header");
      header_seen = true;
      continue;
    }
    std::vector<double> values;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const std::string token = trim(cell);
      char* end = nullptr;
      const double v = std::strtod(token.c_str(), &end);
      if (token.empty() || end != token.c_str() + token.size())
        throw ConfigError(where + ": not a number: '" + token + "'");
      values.push_back(v);
    }
    if (values.size() != kCsvColumns)
      throw ConfigError(where + ": expected " + std::to_string(kCsvColumns) + " columns, got " +
                        std::to_string(values.size()));
    SusceptibilityTensors psi;
    ReflectionTensor gamma;
    const auto dst = fields_of(psi, gamma);
    for (std::size_t k = 0; k < dst.size(); ++k) *dst[k] = {values[1 + 2 * k], values[2 + 2 * k]};
    table.g.push_back(values[0]);
    table.psi.push_back(psi);
    table.gamma.push_back(gamma);
  }
  if (!header_seen) throw ConfigError(path.string() + ": missing meta-atom table header");
  try {
    table.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return table;
}

void write_table_csv(const MetaAtomTable& table, const std::filesystem::path& path) {
  table.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write meta-atom table: " + path.string());
  if (!table.substrate.empty()) out << "# substrate=" << table.substrate << '\n';
  out << "# thickness=" << format_double(table.thickness) << '\n';
  out << "# frequency=" << format_double(table.frequency) << '\n';
  out << csv_header() << '\n';
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << format_double(table.g[i]);
    for (const cd* v : fields_of(table.psi[i], table.gamma[i]))
      out << ',' << format_double(v->real()) << ',' << format_double(v->imag());
    out << '\n';
  }
  if (!out) throw IoError("failed writing meta-atom table: " + path.string());
}

EMSLayout EMSLayout::uniform(std::size_t m_count, std::size_t n_count, double value) {
  return {m_count, n_count, std::vector<double>(m_count * n_count, value)};
}

void validate_layout(const EMSLayout& layout, const MetaAtomTable& table) {
  require(layout.g.size() == layout.m_count * layout.n_count, "layout size does not match M x N");
  for (std::size_t i = 0; i < layout.g.size(); ++i) {
    const double g = layout.g[i];
    if (!(g >= table.g_min() && g <= table.g_max()))
      throw RangeError("layout cell (" + std::to_string(i / layout.n_count) + ", " +
                       std::to_string(i % layout.n_count) + ") g = " + format_double(g) +
                       " outside table interval [" + format_double(table.g_min()) + ", " +
                       format_double(table.g_max()) + "]");
  }
}

LayoutResponse lookup_layout(const EMSLayout& layout, const MetaAtomTable& table) {
  validate_layout(layout, table);
  LayoutResponse out;
  out.psi.reserve(layout.g.size());
  out.gamma.reserve(layout.g.size());
  for (double g : layout.g) {
    const MetaAtomResponse r = lookup_response(table, g);
    out.psi.push_back(r.psi);
    out.gamma.push_back(r.gamma);
  }
  return out;
}

PolarizationGrid polarization_densities(std::size_t m_count, std::size_t n_count,
                                        std::span<const SusceptibilityTensors> psi,
                                        std::span<const AveragedField> averaged) {
  require(psi.size() == m_count * n_count && averaged.size() == psi.size(),
          "susceptibility and averaged-field grids must be congruent");
  PolarizationGrid out{m_count, n_count, std::vector<CVec3>(psi.size()), std::vector<CVec3>(psi.size())};
  const cd eps0(PhysicalConstants::eps0);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const auto& s = psi[i];
    const auto& f = averaged[i];
    out.p_e[i] = {eps0 * s.e_xx * f.e[0], eps0 * s.e_yy * f.e[1], eps0 * s.e_zz * f.e[2]};
    out.p_h[i] = {s.h_xx * f.h[0], s.h_yy * f.h[1], s.h_zz * f.h[2]};
  }
  return out;
}

PolarizationGrid polarization_densities(const EMSLayout& layout, const MetaAtomTable& table,
                                        std::span<const AveragedField> averaged) {
  const LayoutResponse response = lookup_layout(layout, table);
  return polarization_densities(layout.m_count, layout.n_count, response.psi, averaged);
}

SurfaceCurrentGrid SurfaceCurrentGrid::zeros(std::size_t m_count, std::size_t n_count) {
  return {m_count, n_count, std::vector<std::array<cd, 4>>(m_count * n_count)};
}

namespace {

// d/dx (along m) or d/dy (along n) of a scalar cell field.
cd finite_difference(const std::vector<CVec3>& field, std::size_t component, std::size_t m,
                     std::size_t n, std::size_t m_count, std::size_t n_count, bool along_m,
                     double pitch) {
  const std::size_t count = along_m ? m_count : n_count;
  const std::size_t pos = along_m ? m : n;
  auto at = [&](std::size_t p) {
    return along_m ? field[p * n_count + n][component] : field[m * n_count + p][component];
  };
  if (count == 1) return {};
  if (count == 2) return (at(1) - at(0)) / pitch;
  if (pos == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * pitch);
  if (pos + 1 == count) return (3.0 * at(pos) - 4.0 * at(pos - 1) + at(pos - 2)) / (2.0 * pitch);
  return (at(pos + 1) - at(pos - 1)) / (2.0 * pitch);
}

}  // namespace

SurfaceCurrentGrid gstc_currents(const PolarizationGrid& p, const ApertureLattice& lattice,
                                 double omega) {
  require(p.m_count == lattice.m_count && p.n_count == lattice.n_count &&
              p.p_e.size() == lattice.cell_count() && p.p_h.size() == lattice.cell_count(),
          "polarization grid does not match the lattice");
  require(std::isfinite(omega) && omega > 0.0, "omega must be positive");
  SurfaceCurrentGrid out = SurfaceCurrentGrid::zeros(lattice.m_count, lattice.n_count);
  const cd jw = kJ * omega;
  const cd jw_mu = jw * PhysicalConstants::mu0;
  const double inv_eps = 1.0 / PhysicalConstants::eps0;
  for (std::size_t m = 0; m < lattice.m_count; ++m) {
    for (std::size_t n = 0; n < lattice.n_count; ++n) {
      const std::size_t i = lattice.index(m, n);
      const cd dx_pzh = finite_difference(p.p_h, 2, m, n, p.m_count, p.n_count, true, lattice.dx);
      const cd dy_pzh = finite_difference(p.p_h, 2, m, n, p.m_count, p.n_count, false, lattice.dy);
      const cd dx_pze = finite_difference(p.p_e, 2, m, n, p.m_count, p.n_count, true, lattice.dx);
      const cd dy_pze = finite_difference(p.p_e, 2, m, n, p.m_count, p.n_count, false, lattice.dy);
      // z x grad f = (-df/dy, df/dx).
      out.j[i][kJex] = jw * p.p_e[i][0] + dy_pzh;
      out.j[i][kJey] = jw * p.p_e[i][1] - dx_pzh;
      out.j[i][kJhx] = jw_mu * p.p_h[i][0] - inv_eps * dy_pze;
      out.j[i][kJhy] = jw_mu * p.p_h[i][1] + inv_eps * dx_pze;
    }
  }
  return out;
}

SurfaceCurrentGrid layout_currents(const EMSLayout& layout, const MetaAtomTable& table,
                                   const IncidentFieldGrid& incident, const ApertureLattice& lattice,
                                   const PhysicalConstants& constants) {
  require(layout.m_count == lattice.m_count && layout.n_count == lattice.n_count,
          "layout does not match the lattice");
  require(incident.cells.size() == lattice.cell_count(), "incident grid does not match the lattice");
  const LayoutResponse response = lookup_layout(layout, table);
  const std::vector<AveragedField> averaged = surface_averaged_field(incident, response.gamma);
  const PolarizationGrid p =
      polarization_densities(layout.m_count, layout.n_count, response.psi, averaged);
  return gstc_currents(p, lattice, constants.omega());
}

}  // namespace emskin
