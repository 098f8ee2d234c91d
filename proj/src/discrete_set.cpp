#include "pucci/discrete_set.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace pucci {

DiscreteSet::DiscreteSet(int n, int resolution) : n_(n), K_(resolution) {
    if (n < 1 || n > 2) throw ContractViolation("DiscreteSet: n must be 1 or 2");
    const int kmax = n == 1 ? 10 : 6;
    if (resolution < 2 || resolution > kmax)
        throw ContractViolation("DiscreteSet: resolution out of supported range");
    total_ = (std::int64_t{1} << (n_ * K_)) << (2 * K_);
    words_.assign(static_cast<std::size_t>((total_ + 63) / 64), 0);
}

std::int64_t DiscreteSet::cell_index(std::int64_t a0, std::int64_t a1, std::int64_t tj) const {
    const std::int64_t side = side_cells();
    std::int64_t idx = tj * side + a0;
    if (n_ == 2) idx = idx * side + a1;
    return idx;
}

void DiscreteSet::set(std::int64_t idx, bool value) {
    const auto w = static_cast<std::size_t>(idx >> 6);
    const std::uint64_t bit = std::uint64_t{1} << (idx & 63);
    if (value) words_[w] |= bit;
    else words_[w] &= ~bit;
}

std::int64_t DiscreteSet::count_bits(std::int64_t from, std::int64_t to) const {
    if (from >= to) return 0;
    std::int64_t c = 0;
    std::int64_t w0 = from >> 6, w1 = (to - 1) >> 6;
    const std::uint64_t head = ~std::uint64_t{0} << (from & 63);
    const std::uint64_t tail = ~std::uint64_t{0} >> (63 - ((to - 1) & 63));
    if (w0 == w1) return std::popcount(words_[w0] & head & tail);
    c += std::popcount(words_[w0] & head);
    for (std::int64_t w = w0 + 1; w < w1; ++w) c += std::popcount(words_[w]);
    c += std::popcount(words_[w1] & tail);
    return c;
}

bool DiscreteSet::all_bits(std::int64_t from, std::int64_t to) const {
    return count_bits(from, to) == to - from;
}

std::int64_t DiscreteSet::first_unset(std::int64_t from, std::int64_t to) const {
    std::int64_t i = from;
    while (i < to && (i & 63) != 0) {
        if (!get(i)) return i;
        ++i;
    }
    while (i + 64 <= to) {
        const std::uint64_t w = words_[static_cast<std::size_t>(i >> 6)];
        if (w != ~std::uint64_t{0}) return i + std::countr_one(w);
        i += 64;
    }
    for (; i < to; ++i)
        if (!get(i)) return i;
    return -1;
}

void DiscreteSet::set_bits(std::int64_t from, std::int64_t to) {
    if (from >= to) return;
    std::int64_t w0 = from >> 6, w1 = (to - 1) >> 6;
    const std::uint64_t head = ~std::uint64_t{0} << (from & 63);
    const std::uint64_t tail = ~std::uint64_t{0} >> (63 - ((to - 1) & 63));
    if (w0 == w1) {
        words_[w0] |= head & tail;
        return;
    }
    words_[w0] |= head;
    for (std::int64_t w = w0 + 1; w < w1; ++w) words_[w] = ~std::uint64_t{0};
    words_[w1] |= tail;
}

std::int64_t DiscreteSet::count() const {
    std::int64_t c = 0;
    for (std::uint64_t w : words_) c += std::popcount(w);
    return c;
}

std::int64_t DiscreteSet::count_cube(const DyadicCube& cube) const {
    if (cube.n != n_) throw ContractViolation("count_cube: dimension mismatch");
    if (cube.level > K_) throw ContractViolation("count_cube: cube below resolution");
    const int shift = K_ - cube.level;
    const std::int64_t span = std::int64_t{1} << shift;        // cells per space axis
    const std::int64_t tspan = std::int64_t{1} << (2 * shift); // time slabs
    const std::int64_t t0 = cube.tj * tspan;
    const std::int64_t x0 = cube.sx[0] * span;
    std::int64_t c = 0;
    if (n_ == 1) {
        for (std::int64_t t = 0; t < tspan; ++t) {
            const std::int64_t base = (t0 + t) * side_cells();
            c += count_bits(base + x0, base + x0 + span);
        }
    } else {
        const std::int64_t x1 = cube.sx[1] * span;
        for (std::int64_t t = 0; t < tspan; ++t) {
            for (std::int64_t r = 0; r < span; ++r) {
                const std::int64_t base = ((t0 + t) * side_cells() + x0 + r) * side_cells();
                c += count_bits(base + x1, base + x1 + span);
            }
        }
    }
    return c;
}

bool DiscreteSet::is_subset_of(const DiscreteSet& other) const {
    if (other.n_ != n_ || other.K_ != K_) return false;
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~other.words_[i]) return false;
    return true;
}

double DiscreteSet::cell_measure() const {
    return std::pow(2.0, -(n_ * (K_ - 1) + 2 * K_));
}

std::string DiscreteSet::measure_string(std::int64_t count) const {
    return std::to_string(count) + " * 2^-" + std::to_string(n_ * (K_ - 1) + 2 * K_);
}

void DiscreteSet::export_rle(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericalError("export_rle: cannot open " + path.string());
    const char magic[4] = {'P', 'C', 'Z', '1'};
    out.write(magic, 4);
    const std::uint8_t n8 = static_cast<std::uint8_t>(n_), k8 = static_cast<std::uint8_t>(K_);
    const std::uint16_t zero = 0;
    const std::uint64_t cells = static_cast<std::uint64_t>(total_);
    out.write(reinterpret_cast<const char*>(&n8), 1);
    out.write(reinterpret_cast<const char*>(&k8), 1);
    out.write(reinterpret_cast<const char*>(&zero), 2);
    out.write(reinterpret_cast<const char*>(&cells), 8);

    auto emit = [&out](std::int64_t run) {
        while (run >= 0) {  // emit at least one record, splitting long runs
            const std::uint32_t chunk =
                static_cast<std::uint32_t>(std::min<std::int64_t>(run, 0xFFFFFFFFll));
            out.write(reinterpret_cast<const char*>(&chunk), 4);
            run -= chunk;
            if (run == 0) break;
            if (run > 0) {  // splitting requires a zero-length run of the other parity
                const std::uint32_t pad = 0;
                out.write(reinterpret_cast<const char*>(&pad), 4);
            }
        }
    };

    bool current = false;  // runs start with cleared cells
    std::int64_t run = 0;
    for (std::int64_t i = 0; i < total_; ++i) {
        if (get(i) == current) {
            ++run;
        } else {
            emit(run);
            current = !current;
            run = 1;
        }
    }
    emit(run);
}

DiscreteSet DiscreteSet::import_rle(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NumericalError("import_rle: cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "PCZ1", 4) != 0)
        throw NumericalError("import_rle: bad magic");
    std::uint8_t n8 = 0, k8 = 0;
    std::uint16_t zero = 0;
    std::uint64_t cells = 0;
    in.read(reinterpret_cast<char*>(&n8), 1);
    in.read(reinterpret_cast<char*>(&k8), 1);
    in.read(reinterpret_cast<char*>(&zero), 2);
    in.read(reinterpret_cast<char*>(&cells), 8);
    DiscreteSet s(n8, k8);
    if (cells != static_cast<std::uint64_t>(s.total_))
        throw NumericalError("import_rle: cell count mismatch");
    std::int64_t pos = 0;
    bool current = false;
    while (pos < s.total_) {
        std::uint32_t run = 0;
        in.read(reinterpret_cast<char*>(&run), 4);
        if (!in) throw NumericalError("import_rle: truncated stream");
        if (pos + run > s.total_) throw NumericalError("import_rle: run overflows set");
        if (current && run > 0) s.set_bits(pos, pos + run);
        pos += run;
        current = !current;
    }
    return s;
}

}  // namespace pucci
