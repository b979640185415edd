#include "symbranch/csv.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>

#include "symbranch/errors.hpp"

namespace sbm {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : n_cols_(columns.size()) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  out_.open(path, std::ios::trunc);
  if (!out_) throw ConfigError("csv: cannot open " + path);
  out_ << "# schema=1\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != n_cols_) throw std::invalid_argument("csv: column count mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i)
    out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

std::string CsvWriter::num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string CsvWriter::num(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%llu", static_cast<unsigned long long>(v));
  return buf;
}

std::string CsvWriter::num(std::int64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
  return buf;
}

void write_field_csv(const std::string& path, const LatticeField& field) {
  const bool continuum = field.config.mode == LatticeMode::continuum;
  CsvWriter csv(path, {"index", "x", "u", "v"});
  for (std::size_t i = 0; i < field.u.size(); ++i) {
    csv.row({CsvWriter::num(static_cast<std::uint64_t>(i)),
             continuum ? CsvWriter::num(field.config.coord(i)) : std::string(),
             CsvWriter::num(field.u[i]), CsvWriter::num(field.v[i])});
  }
}

namespace {

template <class T>
void put(std::ofstream& out, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  // this codebase targets little-endian hosts; the on-disk layout is LE
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <class T>
T take(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw ConfigError("field dump: truncated file");
  return v;
}

}  // namespace

void write_field_binary(const std::string& path, const LatticeField& field) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("field dump: cannot open " + path);
  out.write("SBMF", 4);
  put<std::uint32_t>(out, 1u);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(field.config.d));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(field.config.side));
  put<std::uint32_t>(out, field.config.mode == LatticeMode::continuum ? 1u : 0u);
  put<double>(out, field.config.h);
  put<double>(out, field.t);
  for (double x : field.u) put<double>(out, x);
  for (double x : field.v) put<double>(out, x);
}

LatticeField read_field_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("field dump: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "SBMF", 4) != 0)
    throw ConfigError("field dump: bad magic in " + path);
  const auto version = take<std::uint32_t>(in);
  if (version != 1u) throw ConfigError("field dump: unsupported version");
  LatticeField f;
  f.config.d = static_cast<int>(take<std::uint32_t>(in));
  f.config.side = static_cast<int>(take<std::uint32_t>(in));
  f.config.mode = take<std::uint32_t>(in) == 1u ? LatticeMode::continuum : LatticeMode::discrete;
  f.config.h = take<double>(in);
  f.t = take<double>(in);
  f.config.validate();
  const std::size_t n = f.config.n_sites();
  f.u.resize(n);
  f.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.u[i] = take<double>(in);
  for (std::size_t i = 0; i < n; ++i) f.v[i] = take<double>(in);
  return f;
}

}  // namespace sbm
