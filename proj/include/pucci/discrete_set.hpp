#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pucci/errors.hpp"
#include "pucci/geometry.hpp"

namespace pucci {

/// Measurable subset of K1 at dyadic resolution K, stored as a bitmap over
/// the level-K cells. Cell order is time-major, then lexicographic in space:
///   n=1: idx = tj * 2^K + a0
///   n=2: idx = tj * 4^K + a0 * 2^K + a1
/// with tj in [0, 4^K) and a_i in [0, 2^K). All measure logic on these sets is
/// integer cell counting; one cell has measure 2^(-n(K-1) - 2K).
class DiscreteSet {
public:
    DiscreteSet(int n, int resolution);

    int n() const { return n_; }
    int resolution() const { return K_; }

    std::int64_t total_cells() const { return total_; }
    std::int64_t side_cells() const { return std::int64_t{1} << K_; }   // per space axis
    std::int64_t time_cells() const { return std::int64_t{1} << (2 * K_); }

    std::int64_t cell_index(std::int64_t a0, std::int64_t a1, std::int64_t tj) const;

    bool get(std::int64_t idx) const {
        return (words_[static_cast<std::size_t>(idx >> 6)] >> (idx & 63)) & 1u;
    }
    void set(std::int64_t idx, bool value);

    /// Number of set cells in [from, to).
    std::int64_t count_bits(std::int64_t from, std::int64_t to) const;
    /// All cells in [from, to) set?
    bool all_bits(std::int64_t from, std::int64_t to) const;
    /// First unset index in [from, to), or -1 if all set.
    std::int64_t first_unset(std::int64_t from, std::int64_t to) const;
    void set_bits(std::int64_t from, std::int64_t to);

    std::int64_t count() const;

    /// Count of set cells inside a dyadic cube (level <= K).
    std::int64_t count_cube(const DyadicCube& cube) const;

    bool is_subset_of(const DiscreteSet& other) const;

    /// Exact measure string "count * 2^-e".
    std::string measure_string(std::int64_t count) const;
    double cell_measure() const;

    /// Run-length-encoded binary round trip. 16-byte header
    /// (magic "PCZ1", u8 n, u8 K, u16 zero, u64 cell count) followed by
    /// little-endian u32 run lengths alternating cleared/set, starting cleared.
    void export_rle(const std::filesystem::path& path) const;
    static DiscreteSet import_rle(const std::filesystem::path& path);

    friend bool operator==(const DiscreteSet& a, const DiscreteSet& b) {
        return a.n_ == b.n_ && a.K_ == b.K_ && a.words_ == b.words_;
    }

private:
    int n_;
    int K_;
    std::int64_t total_;
    std::vector<std::uint64_t> words_;
};

}  // namespace pucci
