#pragma once

// CSV writers for simulated paths and kernel tables. Doubles use the shortest
// round-trip representation so identical inputs give identical bytes.

#include <charconv>
#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <system_error>

#include "kernel.hpp"
#include "pathsim.hpp"

namespace gaussmart::io {

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{}) {
    return "nan";
  }
  return std::string(buf, res.ptr);
}

inline void write_grid_csv(std::ostream& out, std::span<const PathGrid> paths) {
  out << "path_id,time,value\n";
  for (std::size_t k = 0; k < paths.size(); ++k) {
    for (std::size_t i = 0; i < paths[k].times.size(); ++i) {
      out << k << ',' << format_double(paths[k].times[i]) << ',' << format_double(paths[k].values[i])
          << '\n';
    }
  }
}

/// One row per jump; paths without jumps contribute no rows.
inline void write_event_csv(std::ostream& out, std::span<const EventPath> paths) {
  out << "path_id,event_index,time,pre_value,post_value\n";
  for (std::size_t k = 0; k < paths.size(); ++k) {
    for (std::size_t j = 0; j < paths[k].jumps.size(); ++j) {
      const auto& e = paths[k].jumps[j];
      out << k << ',' << j << ',' << format_double(e.time) << ',' << format_double(e.pre_value) << ','
          << format_double(e.post_value) << '\n';
    }
  }
}

inline void write_density_csv(std::ostream& out, const KernelEval& kernel, std::span<const double> ys) {
  out << "y,density\n";
  for (double y : ys) {
    out << format_double(y) << ',' << format_double(kernel.density(y)) << '\n';
  }
}

}  // namespace gaussmart::io
