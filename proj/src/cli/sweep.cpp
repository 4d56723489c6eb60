#include "kpb/cli/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <numbers>
#include <string>
#include <thread>

#include "kpb/cli/format.hpp"

namespace kpb::cli {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

std::vector<double> default_param_axis(FamilyKind kind, std::size_t n) {
  switch (kind) {
    case FamilyKind::delta: return linspace(-15.0, 15.0, n);
    case FamilyKind::epsilon:
    case FamilyKind::hyperbolic: return linspace(-3.0, 3.0, n);
    case FamilyKind::rotation: {
      constexpr double pi = std::numbers::pi;
      std::vector<double> out(n);
      for (std::size_t i = 0; i < n; ++i) {
        out[i] = i + 1 == n ? pi : -pi + 2.0 * pi * static_cast<double>(i + 1) / static_cast<double>(n);
      }
      return out;
    }
    case FamilyKind::raw: break;
  }
  throw ConfigError("family 'raw' has no parameter to sweep");
}

namespace {

void require_increasing(std::span<const double> axis, const char* what) {
  if (axis.empty()) throw ConfigError(std::string(what) + ": axis is empty");
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (!(axis[i] > axis[i - 1])) throw ConfigError(std::string(what) + ": axis must be strictly increasing");
  }
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string param_symbol(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::delta: return "v";
    case FamilyKind::epsilon: return "u";
    default: return "p";
  }
}

}  // namespace

SweepGrid compute_sweep(FamilyKind kind, std::span<const double> params, std::span<const double> axis, AxisMode mode,
                        const LatticeParams& lat, unsigned workers) {
  if (kind == FamilyKind::raw) throw ConfigError("family 'raw' has no parameter to sweep");
  require_increasing(params, "param");
  require_increasing(axis, mode == AxisMode::energy ? "E" : "k0");

  std::vector<ContactInteraction> connections;
  connections.reserve(params.size());
  for (double p : params) {
    try {
      connections.push_back(make_connection({kind, p, std::nullopt}));
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  std::vector<double> energies(axis.size());
  for (std::size_t j = 0; j < axis.size(); ++j) {
    energies[j] = mode == AxisMode::energy ? axis[j] : energy_from_signed_wavenumber(axis[j], lat);
  }

  SweepGrid grid;
  grid.family = kind;
  grid.mode = mode;
  grid.param_axis.assign(params.begin(), params.end());
  grid.axis_values.assign(axis.begin(), axis.end());
  grid.f_half.resize(params.size() * axis.size());
  grid.allowed.resize(params.size() * axis.size());

  auto fill_rows = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < params.size(); i += step) {
      for (std::size_t j = 0; j < axis.size(); ++j) {
        const double f = trace_function(Energy(energies[j]), connections[i], lat);
        grid.f_half[grid.index(i, j)] = f / 2.0;
        grid.allowed[grid.index(i, j)] = std::abs(f) <= 2.0 ? 1 : 0;
      }
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, params.size()));
  if (workers <= 1) {
    fill_rows(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(fill_rows, w, workers);
  }
  return grid;
}

void write_sweep_csv(const SweepGrid& grid, std::ostream& out) {
  out << "param,axis_value,f_half,allowed\n";
  for (std::size_t i = 0; i < grid.param_axis.size(); ++i) {
    const std::string p = format_double(grid.param_axis[i]);
    for (std::size_t j = 0; j < grid.axis_values.size(); ++j) {
      out << p << ',' << format_double(grid.axis_values[j]) << ',' << format_double(grid.f_half[grid.index(i, j)])
          << ',' << (grid.cell(i, j) ? 1 : 0) << '\n';
    }
  }
}

void write_sweep_svg(const SweepGrid& grid, std::ostream& out) {
  const std::size_t np = grid.param_axis.size();
  const std::size_t ne = grid.axis_values.size();
  constexpr std::size_t left = 80;
  constexpr std::size_t top = 20;
  constexpr std::size_t bottom = 60;
  constexpr std::size_t right = 20;
  const std::size_t width = left + np + right;
  const std::size_t height = top + ne + bottom;
  const std::string axis_name = grid.mode == AxisMode::energy ? "E" : "k0";

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" data-param-count=\"" << np << "\" data-axis-count=\""
      << ne << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  out << "<g transform=\"translate(" << left << ',' << top << ")\" fill=\"black\" shape-rendering=\"crispEdges\">\n";
  // Column i, axis increasing upward; vertical runs of allowed cells become one rect.
  for (std::size_t i = 0; i < np; ++i) {
    std::size_t j = 0;
    while (j < ne) {
      if (!grid.cell(i, j)) {
        ++j;
        continue;
      }
      const std::size_t start = j;
      while (j < ne && grid.cell(i, j)) ++j;
      out << "<rect x=\"" << i << "\" y=\"" << (ne - j) << "\" width=\"1\" height=\"" << (j - start) << "\"/>\n";
    }
  }
  out << "</g>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << np << "\" height=\"" << ne
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"14\" fill=\"black\">\n";
  out << "<text x=\"" << left << "\" y=\"" << top + ne + 18 << "\">" << short_number(grid.param_axis.front())
      << "</text>\n";
  out << "<text x=\"" << left + np << "\" y=\"" << top + ne + 18 << "\" text-anchor=\"end\">"
      << short_number(grid.param_axis.back()) << "</text>\n";
  out << "<text x=\"" << left + np / 2 << "\" y=\"" << top + ne + 44 << "\" text-anchor=\"middle\">"
      << param_symbol(grid.family) << " (" << to_string(grid.family) << ")</text>\n";
  out << "<text x=\"" << left - 6 << "\" y=\"" << top + ne << "\" text-anchor=\"end\">"
      << short_number(grid.axis_values.front()) << "</text>\n";
  out << "<text x=\"" << left - 6 << "\" y=\"" << top + 12 << "\" text-anchor=\"end\">"
      << short_number(grid.axis_values.back()) << "</text>\n";
  out << "<text x=\"20\" y=\"" << top + ne / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << top + ne / 2 << ")\">" << axis_name << "</text>\n";
  out << "</g>\n</svg>\n";
}

}  // namespace kpb::cli
