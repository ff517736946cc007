#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pursuit/greedy.hpp"
#include "pursuit/harness.hpp"

namespace pursuit::io {

class io_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// 17 significant digits, enough to round-trip any double.
inline std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double parse_value(const std::string& field, const std::string& where) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &pos);
  } catch (const std::exception&) {
    throw io_error(where + ": cannot parse '" + field + "' as a number");
  }
  if (pos != field.size()) {
    throw io_error(where + ": trailing characters in '" + field + "'");
  }
  return v;
}

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) fields.push_back(field);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

// Matrix CSV: first line "m,n", then m lines of n comma-separated values.
inline void write_matrix(std::ostream& os, const Matrix& A) {
  os << A.rows() << "," << A.cols() << "\n";
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = 0; j < A.cols(); ++j) {
      if (j) os << ",";
      os << format_value(A(i, j));
    }
    os << "\n";
  }
}

inline Matrix read_matrix(std::istream& is, const std::string& name) {
  std::string line;
  if (!std::getline(is, line)) throw io_error(name + ": empty matrix file");
  const auto header = split(line, ',');
  if (header.size() != 2) {
    throw io_error(name + ": header must be 'm,n'");
  }
  const int m = static_cast<int>(parse_value(header[0], name));
  const int n = static_cast<int>(parse_value(header[1], name));
  if (m < 1 || n < 1) throw io_error(name + ": non-positive dimensions");
  Matrix A(m, n);
  for (int i = 0; i < m; ++i) {
    if (!std::getline(is, line)) {
      throw io_error(name + ": expected " + std::to_string(m) +
                     " rows, got " + std::to_string(i));
    }
    const auto fields = split(line, ',');
    if (static_cast<int>(fields.size()) != n) {
      throw io_error(name + ": row " + std::to_string(i) + " has " +
                     std::to_string(fields.size()) + " fields, expected " +
                     std::to_string(n));
    }
    for (int j = 0; j < n; ++j) {
      A(i, j) = parse_value(fields[static_cast<std::size_t>(j)],
                            name + " row " + std::to_string(i));
    }
  }
  return A;
}

// Vector file: one value per line.
inline void write_vector(std::ostream& os, const Vector& v) {
  for (int i = 0; i < v.size(); ++i) os << format_value(v[i]) << "\n";
}

inline Vector read_vector(std::istream& is, const std::string& name) {
  std::vector<double> values;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    values.push_back(parse_value(line, name));
  }
  Vector v(static_cast<int>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    v[static_cast<int>(i)] = values[i];
  }
  return v;
}

inline Matrix read_matrix_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw io_error("cannot open matrix file " + path);
  return read_matrix(is, path);
}

inline Vector read_vector_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw io_error("cannot open vector file " + path);
  return read_vector(is, path);
}

inline std::string join_support(const SupportSet& s) {
  std::string out;
  for (int i : s.indices()) {
    if (!out.empty()) out += ";";
    out += std::to_string(i);
  }
  return out;
}

// Trace CSV: iter,residual_norm,support_size,missed_energy,
// missed_energy_merged,support. Missing ground truth leaves the
// missed-energy fields empty.
inline void write_trace(std::ostream& os, const RecoveryTrace& trace) {
  os << "iter,residual_norm,support_size,missed_energy,missed_energy_merged,"
        "support\n";
  for (const auto& row : trace) {
    os << row.iteration << "," << format_value(row.residual_norm) << ","
       << row.support.size() << ",";
    if (row.missed_energy) os << format_value(*row.missed_energy);
    os << ",";
    if (row.missed_energy_merged) os << format_value(*row.missed_energy_merged);
    os << "," << join_support(row.support) << "\n";
  }
}

// Experiment CSV: one row per trial; booleans as 1/0, absent bound empty.
inline void write_trials(std::ostream& os, const TrialConfig& config,
                         const std::vector<TrialRecord>& records) {
  os << "trial,seed,m,n,K,algorithm,noise_sigma,iterations,converged,"
        "exact_recovery,relative_error,bound\n";
  for (const auto& rec : records) {
    os << rec.trial << "," << rec.seed << "," << config.m << "," << config.n
       << "," << config.sparsity << "," << to_string(config.algorithm) << ","
       << format_value(config.noise_sigma) << "," << rec.iterations_used << ","
       << (rec.converged ? 1 : 0) << "," << (rec.exact_recovery ? 1 : 0) << ","
       << format_value(rec.relative_error) << ",";
    if (rec.theoretical_bound) os << *rec.theoretical_bound;
    os << "\n";
  }
}

// Bounds sweep CSV: delta,rho_4k,rho_3k,c_cosamp,c_sp,dai_per_k with the
// literal "nan" for out-of-domain cells.
inline void write_bounds(std::ostream& os, const std::vector<BoundsRow>& rows) {
  os << "delta,rho_4k,rho_3k,c_cosamp,c_sp,dai_per_k\n";
  for (const auto& row : rows) {
    os << format_value(row.delta) << "," << format_value(row.rho_4k) << ","
       << format_value(row.rho_3k) << "," << format_value(row.c_cosamp) << ","
       << format_value(row.c_sp) << ","
       << format_value(row.dai_per_k_variant ? *row.dai_per_k_variant
                                             : row.dai_per_k_same_rho)
       << "\n";
  }
}

}  // namespace pursuit::io
