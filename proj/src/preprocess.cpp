#include "pttbp/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "pttbp/errors.hpp"

namespace pttbp {

using cplx = std::complex<double>;

FilterSpec filter_spec_for(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::Fsr: return {FilterKind::LowPass, std::nullopt, 0.3, 3};
        case ChannelKind::Ppg: return {FilterKind::BandPass, 0.5, 20.0, 3};
        case ChannelKind::Ecg: return {FilterKind::BandPass, 1.0, 40.0, 3};
        case ChannelKind::Pcg: return {FilterKind::BandPass, 20.0, 240.0, 3};
    }
    return {};
}

namespace {

cplx eval_poly(const std::array<double, 3>& c, cplx zinv) { return c[0] + zinv * (c[1] + zinv * c[2]); }

cplx section_response(const SosSection& s, double omega) {
    const cplx zinv = std::polar(1.0, -omega);
    return eval_poly(s.b, zinv) / eval_poly(s.a, zinv);
}

void validate_spec(const FilterSpec& spec, double fs) {
    const double nyquist = 0.5 * fs;
    if (!(fs > 0.0)) fail(ErrorCode::InvalidCutoff, "fs must be positive");
    if (spec.order < 1) fail(ErrorCode::InvalidCutoff, "filter order must be at least 1");
    if (!(spec.high_cutoff_hz > 0.0 && spec.high_cutoff_hz < nyquist))
        fail(ErrorCode::InvalidCutoff, "high cutoff must lie in (0, fs/2)");
    if (spec.kind == FilterKind::BandPass) {
        if (!spec.low_cutoff_hz) fail(ErrorCode::InvalidCutoff, "band-pass needs a low cutoff");
        if (!(*spec.low_cutoff_hz > 0.0 && *spec.low_cutoff_hz < spec.high_cutoff_hz))
            fail(ErrorCode::InvalidCutoff, "band-pass needs 0 < low cutoff < high cutoff");
    }
}

// Steady-state DF-II-transposed state of one section under a unit step.
std::array<double, 2> step_state(const SosSection& s) {
    const double y = (s.b[0] + s.b[1] + s.b[2]) / (s.a[0] + s.a[1] + s.a[2]);
    const double z2 = s.b[2] - s.a[2] * y;
    const double z1 = s.b[1] - s.a[1] * y + z2;
    return {z1, z2};
}

std::vector<double> run_sos(const Sos& sos, std::span<const double> x, double initial) {
    std::vector<double> y(x.begin(), x.end());
    double scale = initial;
    for (const auto& s : sos) {
        auto [z1, z2] = step_state(s);
        z1 *= scale;
        z2 *= scale;
        for (auto& v : y) {
            const double in = v;
            const double out = s.b[0] * in + z1;
            z1 = s.b[1] * in - s.a[1] * out + z2;
            z2 = s.b[2] * in - s.a[2] * out;
            v = out;
        }
        scale *= (s.b[0] + s.b[1] + s.b[2]) / (s.a[0] + s.a[1] + s.a[2]);
    }
    return y;
}

}  // namespace

Sos design_iir(const FilterSpec& spec, double fs) {
    validate_spec(spec, fs);
    const int n = spec.order;
    const double two_fs = 2.0 * fs;
    auto warp = [&](double f) { return two_fs * std::tan(std::numbers::pi * f / fs); };

    std::vector<cplx> analog;
    for (int k = 0; k < n; ++k)
        analog.push_back(std::polar(1.0, std::numbers::pi * (2.0 * k + n + 1) / (2.0 * n)));

    std::vector<cplx> poles;
    int zeros_at_plus_one = 0;
    double ref_omega = 0.0;
    if (spec.kind == FilterKind::LowPass) {
        const double wc = warp(spec.high_cutoff_hz);
        for (auto p : analog) poles.push_back(p * wc);
    } else {
        const double wl = warp(*spec.low_cutoff_hz);
        const double wh = warp(spec.high_cutoff_hz);
        const double bw = wh - wl;
        const double w0 = std::sqrt(wl * wh);
        for (auto p : analog) {
            const cplx lp = p * (bw / 2.0);
            const cplx root = std::sqrt(lp * lp - w0 * w0);
            poles.push_back(lp + root);
            poles.push_back(lp - root);
        }
        zeros_at_plus_one = n;
        ref_omega = 2.0 * std::atan(w0 / two_fs);
    }
    for (auto& p : poles) p = (two_fs + p) / (two_fs - p);

    // Complex poles come in conjugate pairs; keep the upper half and pair the
    // real ones among themselves.
    std::vector<cplx> upper;
    std::vector<double> real;
    for (auto p : poles) {
        if (std::abs(p.imag()) <= 1e-12 * std::max(1.0, std::abs(p)))
            real.push_back(p.real());
        else if (p.imag() > 0.0)
            upper.push_back(p);
    }
    std::sort(real.begin(), real.end());

    struct Pending {
        std::array<double, 3> a;
        int order;
        double radius;
    };
    std::vector<Pending> denominators;
    for (auto p : upper) denominators.push_back({{1.0, -2.0 * p.real(), std::norm(p)}, 2, std::abs(p)});
    for (std::size_t i = 0; i + 1 < real.size(); i += 2)
        denominators.push_back({{1.0, -(real[i] + real[i + 1]), real[i] * real[i + 1]},
                                2,
                                std::max(std::abs(real[i]), std::abs(real[i + 1]))});
    if (real.size() % 2 == 1) denominators.push_back({{1.0, -real.back(), 0.0}, 1, std::abs(real.back())});
    std::sort(denominators.begin(), denominators.end(),
              [](const Pending& l, const Pending& r) { return l.radius < r.radius; });

    Sos sos;
    int plus_left = zeros_at_plus_one;
    for (const auto& d : denominators) {
        SosSection s;
        s.a = d.a;
        if (d.order == 1) {
            s.b = plus_left > 0 ? std::array<double, 3>{1.0, -1.0, 0.0} : std::array<double, 3>{1.0, 1.0, 0.0};
            if (plus_left > 0) --plus_left;
        } else if (plus_left > 0) {
            s.b = {1.0, 0.0, -1.0};  // zeros at +1 and -1
            --plus_left;
        } else {
            s.b = {1.0, 2.0, 1.0};
        }
        const double g = 1.0 / std::abs(section_response(s, ref_omega));
        for (auto& c : s.b) c *= g;
        sos.push_back(s);
    }
    return sos;
}

cplx frequency_response(const Sos& sos, double freq_hz, double fs) {
    const double omega = 2.0 * std::numbers::pi * freq_hz / fs;
    cplx h = 1.0;
    for (const auto& s : sos) h *= section_response(s, omega);
    return h;
}

double max_pole_radius(const Sos& sos) {
    double r = 0.0;
    for (const auto& s : sos) {
        const cplx disc = std::sqrt(cplx(s.a[1] * s.a[1] - 4.0 * s.a[2]));
        r = std::max({r, std::abs((-s.a[1] + disc) / 2.0), std::abs((-s.a[1] - disc) / 2.0)});
    }
    return r;
}

std::vector<double> sos_filter(const Sos& sos, std::span<const double> x) { return run_sos(sos, x, 0.0); }

int median_window_samples(double fs, double window_ms) {
    if (!(window_ms > 0.0) || !(fs > 0.0)) fail(ErrorCode::InvalidArgument, "median window must be positive");
    long w = std::lround(window_ms * fs / 1000.0);
    if (w < 1) w = 1;
    if (w % 2 == 0) ++w;
    return static_cast<int>(w);
}

std::vector<double> median_smooth(std::span<const double> x, double fs, double window_ms) {
    if (x.empty()) fail(ErrorCode::EmptySignal, "median_smooth on empty signal");
    const std::size_t half = static_cast<std::size_t>(median_window_samples(fs, window_ms) / 2);
    const std::size_t n = x.size();
    std::vector<double> out(n);
    std::vector<double> buf;
    buf.reserve(2 * half + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t h = std::min({half, i, n - 1 - i});
        buf.assign(x.begin() + static_cast<std::ptrdiff_t>(i - h), x.begin() + static_cast<std::ptrdiff_t>(i + h + 1));
        auto mid = buf.begin() + static_cast<std::ptrdiff_t>(h);
        std::nth_element(buf.begin(), mid, buf.end());
        out[i] = *mid;
    }
    return out;
}

std::vector<double> normalize_static(std::span<const double> x) {
    if (x.empty()) fail(ErrorCode::EmptySignal, "normalize_static on empty signal");
    const double n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / n);
    if (x.size() < 2 || !(sd > 1e-12 * std::max(1.0, std::abs(mean))))
        fail(ErrorCode::ConstantSignal, "signal has zero variance");
    std::vector<double> out(x.size());
    std::transform(x.begin(), x.end(), out.begin(), [&](double v) { return (v - mean) / sd; });
    return out;
}

int zero_phase_pad_length(const FilterSpec& spec) { return 3 * (2 * spec.order + 1); }

std::vector<double> zero_phase_filter(std::span<const double> x, const Sos& sos, int pad_len) {
    const auto n = x.size();
    const auto pad = static_cast<std::size_t>(pad_len);
    if (n <= pad)
        fail(ErrorCode::SignalTooShort,
             "need more than " + std::to_string(pad) + " samples, got " + std::to_string(n));

    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t k = pad; k >= 1; --k) ext.push_back(2.0 * x[0] - x[k]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t k = 1; k <= pad; ++k) ext.push_back(2.0 * x[n - 1] - x[n - 1 - k]);

    auto y = run_sos(sos, ext, ext.front());
    std::reverse(y.begin(), y.end());
    y = run_sos(sos, y, y.front());
    std::reverse(y.begin(), y.end());
    return {y.begin() + static_cast<std::ptrdiff_t>(pad), y.end() - static_cast<std::ptrdiff_t>(pad)};
}

std::vector<double> zero_phase_filter(std::span<const double> x, const FilterSpec& spec, double fs) {
    return zero_phase_filter(x, design_iir(spec, fs), zero_phase_pad_length(spec));
}

std::vector<double> preprocess_channel(std::span<const double> x, ChannelKind kind, double fs, double median_ms) {
    auto smoothed = median_smooth(x, fs, median_ms);
    auto normalized = normalize_static(smoothed);
    return zero_phase_filter(normalized, filter_spec_for(kind), fs);
}

}  // namespace pttbp
