#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace pttbp {

enum class ChannelKind { Ecg, Ppg, Pcg, Fsr };

enum class FilterKind { LowPass, BandPass };

struct FilterSpec {
    FilterKind kind = FilterKind::LowPass;
    std::optional<double> low_cutoff_hz;  // band-pass only
    double high_cutoff_hz = 0.0;
    int order = 3;
};

// Per-channel filter bank: FSR low-pass 0.3 Hz, PPG 0.5-20 Hz, ECG 1-40 Hz,
// PCG 20-240 Hz, all third order.
FilterSpec filter_spec_for(ChannelKind kind);

// One biquad, a0 normalized to 1. First-order sections carry b2 = a2 = 0.
struct SosSection {
    std::array<double, 3> b{};
    std::array<double, 3> a{1.0, 0.0, 0.0};
};

using Sos = std::vector<SosSection>;

// Butterworth design via bilinear transform with prewarped cutoffs.
// Throws InvalidCutoff.
Sos design_iir(const FilterSpec& spec, double fs);

// H(e^{j 2 pi f / fs}) of the cascade.
std::complex<double> frequency_response(const Sos& sos, double freq_hz, double fs);

// Largest pole magnitude over all sections.
double max_pole_radius(const Sos& sos);

// Causal single pass with explicit initial states, mainly for tests.
std::vector<double> sos_filter(const Sos& sos, std::span<const double> x);

// Median over a centred window of round(window_ms * fs / 1000) samples,
// bumped to the next odd count; the window shrinks symmetrically at the
// edges. Throws EmptySignal.
std::vector<double> median_smooth(std::span<const double> x, double fs, double window_ms);
int median_window_samples(double fs, double window_ms);

// Whole-record z-score (population statistics). Throws ConstantSignal.
std::vector<double> normalize_static(std::span<const double> x);

// Forward-backward filtering with odd-extension padding of
// 3 * (2 * order + 1) samples and steady-state initial conditions.
// Throws SignalTooShort.
std::vector<double> zero_phase_filter(std::span<const double> x, const FilterSpec& spec, double fs);
std::vector<double> zero_phase_filter(std::span<const double> x, const Sos& sos, int pad_len);
int zero_phase_pad_length(const FilterSpec& spec);

// median_smooth -> normalize_static -> zero_phase_filter(filter_spec_for(kind)).
std::vector<double> preprocess_channel(std::span<const double> x, ChannelKind kind, double fs,
                                       double median_ms = 5.0);

}  // namespace pttbp
