#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qplasma/grid.hpp"
#include "qplasma/series.hpp"

namespace qplasma::diagio {

/// FNV-1a 64-bit hash as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view text);

/// Shortest round-trip decimal text, independent of the global locale.
std::string format_double(double x);

// ---- time series -------------------------------------------------------

/// Column order of the series CSV. The last column repeats the field
/// energy in units of E_F = m v_F^2 / 2.
inline constexpr std::string_view kSeriesHeader =
    "t,field_energy,kinetic_energy,total_energy,mass,momentum,field_energy_ef";

/// A comment line `# model=... config_hash=...` followed by the header and
/// one row per sample.
void write_series_csv(std::ostream& os, const DiagnosticSeries& series);
void write_series_csv(const std::filesystem::path& path, const DiagnosticSeries& series);
DiagnosticSeries read_series_csv(std::istream& is);
DiagnosticSeries read_series_csv(const std::filesystem::path& path);

// ---- snapshots ---------------------------------------------------------

struct SnapshotHeader {
  std::string model;
  std::string config_hash;
  std::string provenance;
  double time = 0.0;
  double H = 0.0;
  PhaseSpaceGrid grid;
  std::size_t rows = 0;  // nx
  std::size_t cols = 0;  // nv for phase space, 2 per stream for wavefunctions
  std::vector<std::string> channels;
};

struct Snapshot {
  SnapshotHeader header;
  std::vector<std::vector<double>> channels;  // each rows * cols, row-major
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

/// f, and optionally f+ = max(f, 0) and f- = max(-f, 0) as extra channels.
Snapshot phase_space_snapshot(const PhaseSpaceField& f, std::string model, double time, double H,
                              bool split_channels);
/// Re and Im of each wavefunction, interleaved per row: (Re psi_0, Im psi_0, Re psi_1, ...).
Snapshot wavefunction_snapshot(const std::vector<std::vector<std::complex<double>>>& psi, const SpatialGrid& grid,
                               std::string model, double time, double H);
/// Rebuilds channel `index` as a phase-space field.
PhaseSpaceField channel_field(const Snapshot& s, std::size_t index = 0);

/// Layout: "QPSN", u32 version, u32 header length, UTF-8 JSON header,
/// u32 crc32 of the header bytes, then each channel as little-endian f64.
/// The header records the crc32 of the payload.
void write_snapshot(std::ostream& os, const Snapshot& s);
void write_snapshot(const std::filesystem::path& path, const Snapshot& s);
/// Throws FormatError on bad magic, version, checksum or payload length.
Snapshot read_snapshot(std::istream& is);
Snapshot read_snapshot(const std::filesystem::path& path);

// ---- analysis ----------------------------------------------------------

struct Peak {
  double t = 0.0;
  double value = 0.0;
};

/// Local maxima of y(t), refined by a parabola through the three samples.
std::vector<Peak> find_peaks(const std::vector<double>& t, const std::vector<double>& y);

struct DampingFit {
  double gamma = 0.0;  // amplitude damping rate; field energy ~ exp(-2 gamma t)
  double omega = 0.0;  // from peak spacing pi / omega
  double gamma_stderr = 0.0;
  double omega_stderr = 0.0;
  std::size_t peaks = 0;
};

/// Log-linear fit of the field-energy peak envelope inside [t0, t1].
/// Throws NumericError with fewer than 5 peaks.
DampingFit fit_damping_rate(const DiagnosticSeries& series, double t0, double t1);
DampingFit fit_damping_rate(const std::vector<double>& t, const std::vector<double>& energy, double t0, double t1);

/// Time of the first local minimum of the peak envelope seeded with the
/// initial value, or a negative value if the envelope decreases throughout.
double damping_halt_time(const std::vector<double>& t, const std::vector<double>& energy);

/// Mean of the field energy over t >= t0.
double time_average(const std::vector<double>& t, const std::vector<double>& y, double t0);

/// Dominant angular frequency of a uniformly sampled signal: zero-padded
/// Hann-windowed spectrum peak, refined by least squares on a sinusoid.
double estimate_frequency(const std::vector<double>& t, const std::vector<double>& y);

struct VortexOptions {
  double threshold = 0.2;         // fraction of the deviation amplitude at the phase velocity
  std::size_t min_v_cells = 3;
  double min_x_fraction = 0.25;   // of the box (one wavelength)
  double search_half_width = 1.0; // |v - v_phase| window, v_F units
  /// A band whose x-modulation is dominated by one spatial harmonic is a
  /// coherent wave response rather than a closed island.
  double max_coherence = 0.5;
};

struct VortexResult {
  bool present = false;
  double width = 0.0;  // half the velocity extent of the deviation region
  std::size_t v_cells = 0;
  double x_fraction = 0.0;
  double coherence = 0.0;  // row-averaged power share of the dominant spatial harmonic
};

/// Walks out from the phase-velocity row while the RMS of f - <f>_x stays
/// above threshold times its value at v_phase, then applies the size and
/// coherence tests to the resulting band.
VortexResult detect_vortex(const PhaseSpaceField& f, double phase_velocity, const VortexOptions& opt = {});

}  // namespace qplasma::diagio
