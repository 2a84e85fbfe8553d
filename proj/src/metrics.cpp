#include "mcmod/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>

namespace mcmod {

PowerSpectrum psd(std::span<const cd> waveform, Index segment, Index overlap) {
    const Index n = static_cast<Index>(waveform.size());
    if (n == 0) throw InvalidArgument("psd: empty waveform");
    if (segment < 1 || segment > n) throw InvalidArgument("psd: segment length must lie in [1, waveform length]");
    if (overlap < 0 || overlap >= segment) throw InvalidArgument("psd: overlap must lie in [0, segment)");

    std::vector<double> hann(static_cast<std::size_t>(segment));
    for (Index i = 0; i < segment; ++i)
        hann[static_cast<std::size_t>(i)] =
            segment == 1 ? 1.0 : 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * double(i) / double(segment));

    Eigen::FFT<double> fft;
    std::vector<cd> frame(static_cast<std::size_t>(segment));
    std::vector<cd> spectrum;
    std::vector<double> acc(static_cast<std::size_t>(segment), 0.0);
    const Index step = segment - overlap;
    Index segments = 0;
    for (Index start = 0; start + segment <= n; start += step, ++segments) {
        for (Index i = 0; i < segment; ++i)
            frame[static_cast<std::size_t>(i)] = waveform[static_cast<std::size_t>(start + i)] * hann[static_cast<std::size_t>(i)];
        fft.fwd(spectrum, frame);
        for (Index i = 0; i < segment; ++i) acc[static_cast<std::size_t>(i)] += std::norm(spectrum[static_cast<std::size_t>(i)]);
    }

    const double peak = *std::max_element(acc.begin(), acc.end());
    if (!(peak > 0.0)) throw InvalidArgument("psd: zero-energy waveform");

    PowerSpectrum out;
    out.frequency.resize(static_cast<std::size_t>(segment));
    out.power_db.resize(static_cast<std::size_t>(segment));
    const Index half = segment / 2;
    for (Index i = 0; i < segment; ++i) {
        const Index bin = (i + segment - half) % segment;  // fftshift
        out.frequency[static_cast<std::size_t>(i)] = double(i - half) / double(segment);
        const double p = acc[static_cast<std::size_t>(bin)] / peak;
        out.power_db[static_cast<std::size_t>(i)] = p > 0.0 ? 10.0 * std::log10(p) : -400.0;
    }
    return out;
}

Papr papr(std::span<const cd> waveform) {
    if (waveform.empty()) throw InvalidArgument("papr: empty waveform");
    double peak = 0.0;
    double sum = 0.0;
    for (const cd& s : waveform) {
        const double p = std::norm(s);
        peak = std::max(peak, p);
        sum += p;
    }
    if (!(sum > 0.0)) throw InvalidArgument("papr: zero-energy waveform");
    Papr r;
    r.linear = peak / (sum / double(waveform.size()));
    r.db = 10.0 * std::log10(r.linear);
    return r;
}

}  // namespace mcmod
