#include "qplasma/diagio.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <bit>
#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "qplasma/error.hpp"
#include "qplasma/fft.hpp"

namespace qplasma {

std::vector<double> DiagnosticSeries::times() const {
  std::vector<double> t;
  for (const auto& s : samples) t.push_back(s.t);
  return t;
}

std::vector<double> DiagnosticSeries::field_energy() const {
  std::vector<double> e;
  for (const auto& s : samples) e.push_back(s.field_energy);
  return e;
}

namespace diagio {

using json = nlohmann::ordered_json;

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double x) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw FormatError("cannot format number");
  return std::string(buf.data(), end);
}

namespace {

double parse_double(std::string_view s) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw FormatError("bad number '" + std::string(s) + "'");
  return x;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto p = s.find(sep, start);
    out.push_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

}  // namespace

void write_series_csv(std::ostream& os, const DiagnosticSeries& series) {
  os << "# model=" << series.model << " config_hash=" << series.config_hash << '\n';
  os << kSeriesHeader << '\n';
  for (const auto& s : series.samples) {
    os << format_double(s.t) << ',' << format_double(s.field_energy) << ',' << format_double(s.kinetic_energy) << ','
       << format_double(s.total_energy) << ',' << format_double(s.mass) << ',' << format_double(s.momentum) << ','
       << format_double(2.0 * s.field_energy) << '\n';
  }
}

void write_series_csv(const std::filesystem::path& path, const DiagnosticSeries& series) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  write_series_csv(os, series);
}

DiagnosticSeries read_series_csv(std::istream& is) {
  DiagnosticSeries series;
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string tok;
      while (meta >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const auto key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "model") series.model = val;
        if (key == "config_hash") series.config_hash = val;
      }
      continue;
    }
    if (!header) {
      if (line != kSeriesHeader) throw FormatError("unexpected series header: " + line);
      header = true;
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() != 7) throw FormatError("series line " + std::to_string(lineno) + " has wrong column count");
    DiagnosticSample s;
    s.t = parse_double(cols[0]);
    s.field_energy = parse_double(cols[1]);
    s.kinetic_energy = parse_double(cols[2]);
    s.total_energy = parse_double(cols[3]);
    s.mass = parse_double(cols[4]);
    s.momentum = parse_double(cols[5]);
    series.samples.push_back(s);
  }
  if (!header) throw FormatError("series has no header");
  return series;
}

DiagnosticSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path.string());
  return read_series_csv(is);
}

// ---- snapshots ---------------------------------------------------------

Snapshot phase_space_snapshot(const PhaseSpaceField& f, std::string model, double time, double H,
                              bool split_channels) {
  Snapshot s;
  s.header.model = std::move(model);
  s.header.time = time;
  s.header.H = H;
  s.header.grid = f.grid();
  s.header.rows = f.nx();
  s.header.cols = f.nv();
  const auto d = f.data();
  s.header.channels.push_back("f");
  s.channels.emplace_back(d.begin(), d.end());
  if (split_channels) {
    std::vector<double> pos(d.size()), neg(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      pos[i] = std::max(d[i], 0.0);
      neg[i] = std::max(-d[i], 0.0);
    }
    s.header.channels.push_back("f_plus");
    s.header.channels.push_back("f_minus");
    s.channels.push_back(std::move(pos));
    s.channels.push_back(std::move(neg));
  }
  return s;
}

Snapshot wavefunction_snapshot(const std::vector<std::vector<std::complex<double>>>& psi, const SpatialGrid& grid,
                               std::string model, double time, double H) {
  Snapshot s;
  s.header.model = std::move(model);
  s.header.time = time;
  s.header.H = H;
  s.header.grid.space = grid;
  s.header.grid.nv = 0;
  s.header.grid.v_max = 0.0;
  s.header.rows = grid.nx;
  s.header.cols = 2 * psi.size();
  s.header.channels.push_back("psi");
  std::vector<double> data(s.header.rows * s.header.cols);
  for (std::size_t i = 0; i < grid.nx; ++i) {
    for (std::size_t a = 0; a < psi.size(); ++a) {
      data[i * s.header.cols + 2 * a] = psi[a][i].real();
      data[i * s.header.cols + 2 * a + 1] = psi[a][i].imag();
    }
  }
  s.channels.push_back(std::move(data));
  return s;
}

PhaseSpaceField channel_field(const Snapshot& s, std::size_t index) {
  if (index >= s.channels.size()) throw FormatError("snapshot has no channel " + std::to_string(index));
  if (s.header.cols != s.header.grid.nv) throw FormatError("snapshot is not a phase-space field");
  PhaseSpaceField f(s.header.grid);
  std::copy(s.channels[index].begin(), s.channels[index].end(), f.data().begin());
  return f;
}

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw FormatError("truncated snapshot");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::vector<unsigned char> encode_le(const std::vector<double>& v) {
  std::vector<unsigned char> out(v.size() * 8);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto bits = std::bit_cast<std::uint64_t>(v[i]);
    for (int b = 0; b < 8; ++b) out[i * 8 + b] = static_cast<unsigned char>(bits >> (8 * b));
  }
  return out;
}

std::uint32_t crc(const unsigned char* p, std::size_t n, std::uint32_t seed = 0) {
  uLong c = seed;
  while (n > 0) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
    c = crc32(c, p, chunk);
    p += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(c);
}

}  // namespace

void write_snapshot(std::ostream& os, const Snapshot& s) {
  const auto& h = s.header;
  if (s.channels.size() != h.channels.size()) throw FormatError("channel names and data disagree");
  std::vector<std::vector<unsigned char>> payload;
  std::uint32_t pcrc = 0;
  for (const auto& ch : s.channels) {
    if (ch.size() != h.rows * h.cols) throw FormatError("channel length does not match rows * cols");
    payload.push_back(encode_le(ch));
    pcrc = crc(payload.back().data(), payload.back().size(), pcrc);
  }
  json j;
  j["model"] = h.model;
  j["config_hash"] = h.config_hash;
  j["provenance"] = h.provenance;
  j["time"] = h.time;
  j["H"] = h.H;
  j["length"] = h.grid.space.length;
  j["nx"] = h.grid.space.nx;
  j["nv"] = h.grid.nv;
  j["v_max"] = h.grid.v_max;
  j["rows"] = h.rows;
  j["cols"] = h.cols;
  j["channels"] = h.channels;
  j["units"] = {{"x", "lambda_F"}, {"v", "v_F"}, {"t", "1/omega_p"}, {"f", "n0/v_F"}};
  j["byte_order"] = "little";
  j["payload_crc32"] = pcrc;
  const std::string text = j.dump();
  os.write("QPSN", 4);
  put_u32(os, kSnapshotVersion);
  put_u32(os, static_cast<std::uint32_t>(text.size()));
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  put_u32(os, crc(reinterpret_cast<const unsigned char*>(text.data()), text.size()));
  for (const auto& p : payload) os.write(reinterpret_cast<const char*>(p.data()), static_cast<std::streamsize>(p.size()));
  if (!os) throw FormatError("snapshot write failed");
}

void write_snapshot(const std::filesystem::path& path, const Snapshot& s) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  write_snapshot(os, s);
}

Snapshot read_snapshot(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "QPSN", 4) != 0) throw FormatError("not a snapshot (bad magic)");
  const auto version = get_u32(is);
  if (version != kSnapshotVersion) throw FormatError("unsupported snapshot version " + std::to_string(version));
  const auto hlen = get_u32(is);
  std::string text(hlen, '\0');
  if (!is.read(text.data(), hlen)) throw FormatError("truncated snapshot header");
  const auto hcrc = get_u32(is);
  if (hcrc != crc(reinterpret_cast<const unsigned char*>(text.data()), text.size()))
    throw FormatError("snapshot header checksum mismatch");
  Snapshot s;
  try {
    const auto j = json::parse(text);
    auto& h = s.header;
    h.model = j.at("model").get<std::string>();
    h.config_hash = j.at("config_hash").get<std::string>();
    h.provenance = j.at("provenance").get<std::string>();
    h.time = j.at("time").get<double>();
    h.H = j.at("H").get<double>();
    h.grid.space.length = j.at("length").get<double>();
    h.grid.space.nx = j.at("nx").get<std::size_t>();
    h.grid.nv = j.at("nv").get<std::size_t>();
    h.grid.v_max = j.at("v_max").get<double>();
    h.rows = j.at("rows").get<std::size_t>();
    h.cols = j.at("cols").get<std::size_t>();
    h.channels = j.at("channels").get<std::vector<std::string>>();
    const auto pcrc = j.at("payload_crc32").get<std::uint32_t>();
    std::uint32_t got = 0;
    const std::size_t n = h.rows * h.cols;
    std::vector<unsigned char> buf(n * 8);
    for (std::size_t c = 0; c < h.channels.size(); ++c) {
      if (!is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size())))
        throw FormatError("snapshot payload shorter than rows * cols * channels");
      got = crc(buf.data(), buf.size(), got);
      std::vector<double> ch(n);
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(buf[i * 8 + b]) << (8 * b);
        ch[i] = std::bit_cast<double>(bits);
      }
      s.channels.push_back(std::move(ch));
    }
    if (is.peek() != std::char_traits<char>::eof()) throw FormatError("snapshot has trailing bytes");
    if (got != pcrc) throw FormatError("snapshot payload checksum mismatch");
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed snapshot header: ") + e.what());
  }
  return s;
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open " + path.string());
  return read_snapshot(is);
}

// ---- analysis ----------------------------------------------------------

std::vector<Peak> find_peaks(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size()) throw DomainError("time and value arrays differ in length");
  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) {
      const double a = y[i - 1], b = y[i], c = y[i + 1];
      const double den = a - 2.0 * b + c;
      double off = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
      off = std::clamp(off, -0.5, 0.5);
      const double dt = 0.5 * (t[i + 1] - t[i - 1]);
      peaks.push_back({t[i] + off * dt, b - 0.25 * (a - c) * off});
    }
  }
  return peaks;
}

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0, slope_err = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    ss += r * r;
  }
  f.slope_err = x.size() > 2 ? std::sqrt(ss / (n - 2.0) / sxx) : 0.0;
  return f;
}

}  // namespace

DampingFit fit_damping_rate(const std::vector<double>& t, const std::vector<double>& energy, double t0, double t1) {
  std::vector<double> pt, lv;
  for (const auto& p : find_peaks(t, energy)) {
    if (p.t >= t0 && p.t <= t1 && p.value > 0.0) {
      pt.push_back(p.t);
      lv.push_back(std::log(p.value));
    }
  }
  if (pt.size() < 5) {
    throw NumericError("damping fit needs at least 5 field-energy peaks in [" + format_double(t0) + ", " +
                       format_double(t1) + "], found " + std::to_string(pt.size()));
  }
  DampingFit fit;
  fit.peaks = pt.size();
  const auto env = fit_line(pt, lv);
  fit.gamma = -0.5 * env.slope;
  fit.gamma_stderr = 0.5 * env.slope_err;
  std::vector<double> idx(pt.size());
  for (std::size_t i = 0; i < pt.size(); ++i) idx[i] = static_cast<double>(i);
  const auto spacing = fit_line(idx, pt);
  fit.omega = std::numbers::pi / spacing.slope;
  fit.omega_stderr = fit.omega * spacing.slope_err / spacing.slope;
  return fit;
}

DampingFit fit_damping_rate(const DiagnosticSeries& series, double t0, double t1) {
  return fit_damping_rate(series.times(), series.field_energy(), t0, t1);
}

double damping_halt_time(const std::vector<double>& t, const std::vector<double>& energy) {
  if (t.empty() || t.size() != energy.size()) throw DomainError("halt time needs matching non-empty series");
  // The envelope starts from the initial field energy.
  std::vector<Peak> env{{t.front(), energy.front()}};
  for (const auto& p : find_peaks(t, energy)) env.push_back(p);
  for (std::size_t i = 1; i + 1 < env.size(); ++i) {
    if (env[i].value < env[i - 1].value && env[i].value <= env[i + 1].value) return env[i].t;
  }
  return -1.0;
}

double time_average(const std::vector<double>& t, const std::vector<double>& y, double t0) {
  double s = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= t0) {
      s += y[i];
      ++n;
    }
  }
  if (n == 0) throw DomainError("no samples after t0");
  return s / static_cast<double>(n);
}

double estimate_frequency(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 8) throw DomainError("frequency estimate needs >= 8 samples");
  const std::size_t n = t.size();
  const double dt = (t.back() - t.front()) / static_cast<double>(n - 1);
  double mean = 0.0;
  for (double v : y) mean += v / static_cast<double>(n);
  std::size_t m = 1;
  while (m < 8 * n) m <<= 1;
  std::vector<cplx> buf(m, cplx(0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1));
    buf[i] = (y[i] - mean) * w;
  }
  const ComplexFft fft(m);
  fft.forward(buf, buf);
  std::size_t best = 1;
  for (std::size_t k = 1; k < m / 2; ++k)
    if (std::abs(buf[k]) > std::abs(buf[best])) best = k;
  const double dw = 2.0 * std::numbers::pi / (static_cast<double>(m) * dt);
  const double w0 = static_cast<double>(best) * dw;
  // Least-squares sinusoid a cos + b sin + c, minimized over omega.
  auto misfit = [&](double w) {
    double scc = 0, sss = 0, scs = 0, sc = 0, ss = 0, syc = 0, sys = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = std::cos(w * t[i]), s = std::sin(w * t[i]);
      scc += c * c;
      sss += s * s;
      scs += c * s;
      sc += c;
      ss += s;
      syc += y[i] * c;
      sys += y[i] * s;
      sy += y[i];
    }
    Eigen::Matrix3d A;
    A << scc, scs, sc, scs, sss, ss, sc, ss, static_cast<double>(n);
    const Eigen::Vector3d coef = A.ldlt().solve(Eigen::Vector3d(syc, sys, sy));
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - coef[0] * std::cos(w * t[i]) - coef[1] * std::sin(w * t[i]) - coef[2];
      res += e * e;
    }
    return res;
  };
  const auto [w, f] = boost::math::tools::brent_find_minima(misfit, std::max(w0 - 2.0 * dw, 0.5 * dw), w0 + 2.0 * dw, 52);
  (void)f;
  return w;
}

VortexResult detect_vortex(const PhaseSpaceField& f, double phase_velocity, const VortexOptions& opt) {
  const auto& g = f.grid();
  const std::size_t nx = g.nx(), nv = g.nv;
  std::vector<double> avg(nv, 0.0), rms(nv, 0.0);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < nv; ++j) avg[j] += f(i, j) / static_cast<double>(nx);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < nv; ++j) rms[j] += std::pow(f(i, j) - avg[j], 2) / static_cast<double>(nx);
  for (auto& r : rms) r = std::sqrt(r);
  VortexResult res;
  const std::size_t jph = g.nearest_v(phase_velocity);
  const double scale = rms[jph];
  if (!(scale > 1e-9 * std::max(f.max_abs(), 1e-300))) return res;
  const double thr = opt.threshold * scale;
  auto inside = [&](std::size_t j) { return std::abs(g.v(j) - phase_velocity) <= opt.search_half_width; };
  // Walk outward from the wave-frame row while the row amplitude stays above threshold.
  std::size_t jtop = jph, jbot = jph;
  bool closed_top = false, closed_bot = false;
  while (true) {
    if (jtop + 1 >= nv || !inside(jtop + 1)) break;
    if (rms[jtop + 1] <= thr) {
      closed_top = true;
      break;
    }
    ++jtop;
  }
  while (true) {
    if (jbot == 0 || !inside(jbot - 1)) break;
    if (rms[jbot - 1] <= thr) {
      closed_bot = true;
      break;
    }
    --jbot;
  }
  const double half = 0.5 * g.dv();
  const double up = g.v(jtop) + half - phase_velocity;
  const double down = phase_velocity - (g.v(jbot) - half);
  // One side may merge with the bulk of the distribution; the tighter side bounds the island.
  if (closed_top && closed_bot) res.width = std::min(up, down);
  else if (closed_top) res.width = up;
  else if (closed_bot) res.width = down;
  else return res;
  const auto wcells = static_cast<std::size_t>(std::ceil(res.width / g.dv()));
  const std::size_t j0 = jph >= wcells ? jph - wcells : 0;
  const std::size_t j1 = std::min(nv - 1, jph + wcells);
  res.v_cells = j1 - j0 + 1;
  std::size_t xcells = 0;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = j0; j <= j1; ++j) {
      if (std::abs(f(i, j) - avg[j]) > thr) {
        ++xcells;
        break;
      }
    }
  }
  res.x_fraction = static_cast<double>(xcells) / static_cast<double>(nx);
  const RealFft fft(nx);
  std::vector<double> row(nx);
  std::vector<cplx> spec(fft.bins());
  double share = 0.0;
  for (std::size_t j = j0; j <= j1; ++j) {
    for (std::size_t i = 0; i < nx; ++i) row[i] = f(i, j);
    fft.forward(row, spec);
    double best = 0.0, total = 0.0;
    for (std::size_t m = 1; m < spec.size(); ++m) {
      const double p = std::norm(spec[m]);
      best = std::max(best, p);
      total += p;
    }
    share += total > 0.0 ? best / total : 1.0;
  }
  res.coherence = share / static_cast<double>(j1 - j0 + 1);
  res.present = res.v_cells >= opt.min_v_cells && res.x_fraction >= opt.min_x_fraction &&
                res.coherence <= opt.max_coherence;
  if (!res.present) res.width = 0.0;
  return res;
}

}  // namespace diagio
}  // namespace qplasma
