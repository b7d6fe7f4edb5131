// Diagonal extended channels: per receiver/transmitter pair a tau x tau
// diagonal gain matrix (one complex gain per time slot).

#ifndef CAIA_CHANNEL_HPP
#define CAIA_CHANNEL_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "caia/diag.hpp"

namespace caia {

struct ChannelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GainBounds {
    double gmin = 0.5;
    double gmax = 2.0;
};

class ExtendedChannel {
  public:
    ExtendedChannel() = default;

    /// All gains start as identity diagonals.
    ExtendedChannel(int tau, int receivers, int transmitters);

    int tau() const { return tau_; }
    int receivers() const { return N_; }
    int transmitters() const { return K_; }

    /// 1-based receiver j, transmitter k.
    const DiagonalMatrix& gain(int j, int k) const;
    void set_gain(int j, int k, DiagonalMatrix g);

    /// One complex scalar per pair, at a single slot (0-based).
    Complex slot_gain(int slot, int j, int k) const;

    /// True when every gain magnitude lies in [gmin, gmax].
    bool within_bounds(const GainBounds& bounds) const;

    /// New channel keeping only the given slots (0-based, in the given order).
    ExtendedChannel slot_slice(const std::vector<int>& slots) const;

  private:
    int index(int j, int k) const;

    int tau_ = 0;
    int N_ = 0;
    int K_ = 0;
    std::vector<DiagonalMatrix> gains_;
};

/// I.i.d. gains: magnitude uniform in [gmin, gmax], phase uniform. The same
/// seed always reproduces the same channel.
ExtendedChannel random_channel(int tau, int receivers, int transmitters,
                               std::uint64_t seed, const GainBounds& bounds = {});

/// Gains drawn from a finite grid of `levels` values: magnitudes spaced
/// geometrically across [gmin, gmax], phases equispaced, level index shared.
/// Products of such gains land on a coarse grid, so exact value collisions
/// across slots happen at a useful rate.
ExtendedChannel random_quantized_channel(int tau, int receivers, int transmitters,
                                         std::uint64_t seed, const GainBounds& bounds,
                                         int levels);

/// Text dump, one line per pair: "H j k re1 im1 ... re_tau im_tau", written
/// with enough digits for a lossless round-trip. A slot stream is stored in
/// the same format with tau equal to the number of slots.
void write_channel(std::ostream& out, const ExtendedChannel& channel);
void write_channel_file(const std::string& path, const ExtendedChannel& channel);

ExtendedChannel read_channel(std::istream& in);
ExtendedChannel read_channel_file(const std::string& path);

}  // namespace caia

#endif
