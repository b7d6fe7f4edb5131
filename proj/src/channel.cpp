#include "caia/channel.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace caia {

namespace {

void check_bounds(const GainBounds& b) {
    if (!(0.0 < b.gmin) || !(b.gmin <= b.gmax))
        throw ChannelError("gain bounds must satisfy 0 < gmin <= gmax");
}

Complex polar_gain(double magnitude, double phase) {
    return Complex(magnitude * std::cos(phase), magnitude * std::sin(phase));
}

}  // namespace

ExtendedChannel::ExtendedChannel(int tau, int receivers, int transmitters)
    : tau_(tau), N_(receivers), K_(transmitters) {
    if (tau <= 0 || receivers <= 0 || transmitters <= 0)
        throw ChannelError("channel dimensions must be positive");
    gains_.assign(static_cast<size_t>(N_) * K_, DiagonalMatrix::identity(tau_));
}

int ExtendedChannel::index(int j, int k) const {
    if (j < 1 || j > N_ || k < 1 || k > K_)
        throw ChannelError("channel pair out of range: receiver " + std::to_string(j) +
                           ", transmitter " + std::to_string(k));
    return (j - 1) * K_ + (k - 1);
}

const DiagonalMatrix& ExtendedChannel::gain(int j, int k) const {
    return gains_[index(j, k)];
}

void ExtendedChannel::set_gain(int j, int k, DiagonalMatrix g) {
    if (g.size() != tau_) throw ChannelError("gain size does not match channel extension");
    gains_[index(j, k)] = std::move(g);
}

Complex ExtendedChannel::slot_gain(int slot, int j, int k) const {
    if (slot < 0 || slot >= tau_) throw ChannelError("slot out of range");
    return gains_[index(j, k)](slot);
}

bool ExtendedChannel::within_bounds(const GainBounds& bounds) const {
    for (const auto& g : gains_)
        for (const auto& e : g.entries()) {
            const double m = std::abs(e);
            if (m < bounds.gmin || m > bounds.gmax) return false;
        }
    return true;
}

ExtendedChannel ExtendedChannel::slot_slice(const std::vector<int>& slots) const {
    if (slots.empty()) throw ChannelError("slot slice needs at least one slot");
    ExtendedChannel out(static_cast<int>(slots.size()), N_, K_);
    for (int j = 1; j <= N_; ++j)
        for (int k = 1; k <= K_; ++k) {
            std::vector<Complex> entries;
            entries.reserve(slots.size());
            for (int s : slots) entries.push_back(slot_gain(s, j, k));
            out.set_gain(j, k, DiagonalMatrix(std::move(entries)));
        }
    return out;
}

ExtendedChannel random_channel(int tau, int receivers, int transmitters,
                               std::uint64_t seed, const GainBounds& bounds) {
    check_bounds(bounds);
    ExtendedChannel out(tau, receivers, transmitters);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mag(bounds.gmin, bounds.gmax);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (int j = 1; j <= receivers; ++j)
        for (int k = 1; k <= transmitters; ++k) {
            std::vector<Complex> entries(tau);
            for (auto& e : entries) {
                const double m = mag(rng);
                e = polar_gain(m, phase(rng));
            }
            out.set_gain(j, k, DiagonalMatrix(std::move(entries)));
        }
    return out;
}

ExtendedChannel random_quantized_channel(int tau, int receivers, int transmitters,
                                         std::uint64_t seed, const GainBounds& bounds,
                                         int levels) {
    check_bounds(bounds);
    if (levels < 1) throw ChannelError("quantization needs at least one level");
    ExtendedChannel out(tau, receivers, transmitters);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, levels - 1);
    const double ratio =
        levels > 1 ? std::pow(bounds.gmax / bounds.gmin, 1.0 / (levels - 1)) : 1.0;
    // One level index drives both magnitude and phase, so each gain takes
    // exactly `levels` values and products of gains stay on a coarse grid.
    std::vector<Complex> grid(levels);
    for (int l = 0; l < levels; ++l)
        grid[l] = polar_gain(bounds.gmin * std::pow(ratio, l),
                             2.0 * std::numbers::pi * l / levels);
    for (int j = 1; j <= receivers; ++j)
        for (int k = 1; k <= transmitters; ++k) {
            std::vector<Complex> entries(tau);
            for (auto& e : entries) e = grid[pick(rng)];
            out.set_gain(j, k, DiagonalMatrix(std::move(entries)));
        }
    return out;
}

void write_channel(std::ostream& out, const ExtendedChannel& channel) {
    out.precision(std::numeric_limits<double>::max_digits10);
    out << "tau " << channel.tau() << " receivers " << channel.receivers()
        << " transmitters " << channel.transmitters() << "\n";
    for (int j = 1; j <= channel.receivers(); ++j)
        for (int k = 1; k <= channel.transmitters(); ++k) {
            out << "H " << j << " " << k;
            const auto& g = channel.gain(j, k);
            for (int s = 0; s < channel.tau(); ++s)
                out << " " << g(s).real() << " " << g(s).imag();
            out << "\n";
        }
}

void write_channel_file(const std::string& path, const ExtendedChannel& channel) {
    std::ofstream out(path);
    if (!out) throw ChannelError("cannot open " + path + " for writing");
    write_channel(out, channel);
    if (!out) throw ChannelError("write to " + path + " failed");
}

ExtendedChannel read_channel(std::istream& in) {
    std::string tag;
    int tau = 0, receivers = 0, transmitters = 0;
    std::string tag2, tag3;
    if (!(in >> tag >> tau >> tag2 >> receivers >> tag3 >> transmitters) ||
        tag != "tau" || tag2 != "receivers" || tag3 != "transmitters")
        throw ChannelError("malformed channel header");
    ExtendedChannel out(tau, receivers, transmitters);
    std::vector<bool> seen(static_cast<size_t>(receivers) * transmitters, false);
    for (size_t line = 0; line < seen.size(); ++line) {
        int j = 0, k = 0;
        if (!(in >> tag >> j >> k) || tag != "H")
            throw ChannelError("malformed channel entry line");
        if (j < 1 || j > receivers || k < 1 || k > transmitters)
            throw ChannelError("channel entry out of range");
        if (seen[(j - 1) * static_cast<size_t>(transmitters) + (k - 1)])
            throw ChannelError("duplicate channel entry");
        seen[(j - 1) * static_cast<size_t>(transmitters) + (k - 1)] = true;
        std::vector<Complex> entries(tau);
        for (auto& e : entries) {
            double re = 0, im = 0;
            if (!(in >> re >> im)) throw ChannelError("short channel entry line");
            e = Complex(re, im);
        }
        out.set_gain(j, k, DiagonalMatrix(std::move(entries)));
    }
    return out;
}

ExtendedChannel read_channel_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ChannelError("cannot open " + path);
    return read_channel(in);
}

}  // namespace caia
