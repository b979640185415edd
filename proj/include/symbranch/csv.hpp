#ifndef SYMBRANCH_CSV_HPP
#define SYMBRANCH_CSV_HPP

#include <fstream>
#include <string>
#include <vector>

#include "symbranch/lattice.hpp"

namespace sbm {

// Deterministic CSV writer: `# schema=1` header comment, then the column
// row. Doubles print as shortest round-trippable (%.17g); the body is
// byte-identical across runs for identical inputs.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);

  void row(const std::vector<std::string>& cells);

  static std::string num(double v);
  static std::string num(std::uint64_t v);
  static std::string num(std::int64_t v);

 private:
  std::ofstream out_;
  std::size_t n_cols_;
};

// One row per site: index, x coordinate (continuum; empty in discrete
// mode), u, v.
void write_field_csv(const std::string& path, const LatticeField& field);

// Compact little-endian dump:
//   magic "SBMF", u32 version = 1,
//   u32 d, u32 side, u32 mode (0 discrete / 1 continuum), f64 h, f64 t,
//   side^d f64 u values, side^d f64 v values.
void write_field_binary(const std::string& path, const LatticeField& field);
LatticeField read_field_binary(const std::string& path);

}  // namespace sbm

#endif
