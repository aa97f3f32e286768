#include "sllg/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace sllg {

namespace {

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& os, double v) { put_u64(os, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

void write_field_body(std::ostream& os, const Field& f) {
  os.write("SLLG1", 5);
  put_u64(os, static_cast<std::uint64_t>(f.grid().nx));
  put_u64(os, static_cast<std::uint64_t>(f.grid().ny));
  put_f64(os, f.grid().lx);
  put_f64(os, f.grid().ly);
  put_u64(os, static_cast<std::uint64_t>(f.ncomp()));
  for (double v : f.raw()) put_f64(os, v);
}

Field read_field_body(std::istream& is, const std::string& path) {
  char magic[5];
  is.read(magic, 5);
  if (!is || std::memcmp(magic, "SLLG1", 5) != 0)
    throw std::runtime_error(path + ": not a field snapshot (bad magic)");
  auto nx = static_cast<int>(get_u64(is));
  auto ny = static_cast<int>(get_u64(is));
  double lx = get_f64(is);
  double ly = get_f64(is);
  auto ncomp = static_cast<int>(get_u64(is));
  if (!is) throw std::runtime_error(path + ": truncated snapshot header");
  Grid g(nx, ny, lx, ly);
  Field f(g, ncomp);
  for (double& v : f.raw()) v = get_f64(is);
  if (!is) throw std::runtime_error(path + ": truncated snapshot data");
  return f;
}

}  // namespace

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_snapshot(const std::string& path, const Field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_field_body(os, f);
  if (!os) throw std::runtime_error("write failed: " + path);
}

Field read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  return read_field_body(is, path);
}

void write_checkpoint(const std::string& path, const Checkpoint& ck) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os.write("SLLGCK1", 7);
  put_f64(os, ck.state.t);
  put_f64(os, ck.dt);
  put_u64(os, ck.step);
  put_u64(os, ck.config_hash);
  write_field_body(os, ck.state.s);
  write_field_body(os, ck.state.m.field());
  if (!os) throw std::runtime_error("write failed: " + path);
}

Checkpoint read_checkpoint(const std::string& path, std::uint64_t expected_hash) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  char magic[7];
  is.read(magic, 7);
  if (!is || std::memcmp(magic, "SLLGCK1", 7) != 0)
    throw std::runtime_error(path + ": not a checkpoint (bad magic)");
  double t = get_f64(is);
  double dt = get_f64(is);
  std::uint64_t step = get_u64(is);
  std::uint64_t hash = get_u64(is);
  if (expected_hash != 0 && hash != expected_hash)
    throw std::runtime_error(path + ": checkpoint config hash mismatch");
  Field s = read_field_body(is, path);
  Field m = read_field_body(is, path);
  // Bit-exact resume: the stored m already satisfies the constraint.
  Checkpoint ck{State(std::move(s), Magnetization::adopt_checked(std::move(m), 1e-9), t), dt,
                step, hash};
  return ck;
}

}  // namespace sllg
