#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "epkg/errors.hpp"
#include "epkg/integrator.hpp"

namespace epkg {

namespace {

constexpr char kMagic[8] = {'E', 'P', 'K', 'G', 'T', 'R', 'A', 'J'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  unsigned char b[sizeof(T)];
  is.read(reinterpret_cast<char*>(b), sizeof(T));
  if (!is) throw Error("trajectory file is truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

struct TrajectoryWriter::Impl {
  std::ofstream os;
};

TrajectoryWriter::TrajectoryWriter(const std::string& path, double dt, int record_stride, bool nonlinear)
    : impl_(std::make_unique<Impl>()) {
  impl_->os.open(path, std::ios::binary | std::ios::trunc);
  if (!impl_->os) throw Error("cannot open trajectory file '" + path + "' for writing");
  impl_->os.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(impl_->os, kVersion);
  put<std::uint32_t>(impl_->os, nonlinear ? 1u : 0u);
  put<double>(impl_->os, dt);
  put<std::uint32_t>(impl_->os, static_cast<std::uint32_t>(record_stride));
  put<std::uint32_t>(impl_->os, 0u);
}

TrajectoryWriter::~TrajectoryWriter() = default;

void TrajectoryWriter::append(const Profile& p) {
  auto& os = impl_->os;
  const GridSpec& g = p.f.grid();
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.nx));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.ny));
  put<double>(os, g.L);
  put<double>(os, p.t);
  for (const cd& c : p.f.coeffs()) {
    put<double>(os, c.real());
    put<double>(os, c.imag());
  }
  if (!os) throw Error("failed writing trajectory record");
}

void TrajectoryWriter::close() {
  impl_->os.close();
  if (impl_->os.fail()) throw Error("failed closing trajectory file");
}

void write_trajectory(const std::string& path, const Trajectory& traj) {
  TrajectoryWriter w(path, traj.dt, traj.record_stride, traj.nonlinear);
  for (const auto& p : traj.profiles) w.append(p);
  w.close();
}

Trajectory read_trajectory(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open trajectory file '" + path + "'");
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw Error("not a trajectory file: '" + path + "'");
  const auto version = get<std::uint32_t>(is);
  if (version != kVersion) throw Error("unsupported trajectory version " + std::to_string(version));
  Trajectory traj;
  traj.nonlinear = (get<std::uint32_t>(is) & 1u) != 0;
  traj.dt = get<double>(is);
  traj.record_stride = static_cast<int>(get<std::uint32_t>(is));
  (void)get<std::uint32_t>(is);
  while (is.peek() != std::char_traits<char>::eof()) {
    const auto nx = static_cast<int>(get<std::uint32_t>(is));
    const auto ny = static_cast<int>(get<std::uint32_t>(is));
    const double L = get<double>(is);
    const double t = get<double>(is);
    const GridSpec g = GridSpec::make(nx, ny, L);
    std::vector<cd> c(g.size());
    for (auto& z : c) {
      const double re = get<double>(is);
      const double im = get<double>(is);
      z = cd(re, im);
    }
    traj.times.push_back(t);
    traj.profiles.push_back({SpectralField(g, std::move(c), false), t});
  }
  return traj;
}

}  // namespace epkg
