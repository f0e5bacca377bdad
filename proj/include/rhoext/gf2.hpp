#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace rhoext {

// A vector over GF(2), packed 64 entries per word.
class GF2Vector {
  public:
    GF2Vector() = default;
    explicit GF2Vector(size_t n) : size_(n), words_((n + 63) / 64, 0) {}

    size_t size() const { return size_; }
    bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i) { words_[i >> 6] |= uint64_t{1} << (i & 63); }
    void flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }
    bool zero() const {
        for (uint64_t w : words_)
            if (w) return false;
        return true;
    }
    void operator^=(const GF2Vector& other) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    }
    // Index of the lowest set bit, or nullopt if zero.
    std::optional<size_t> leading() const;
    bool operator==(const GF2Vector&) const = default;

  private:
    size_t size_ = 0;
    std::vector<uint64_t> words_;
};

// A row space over GF(2) kept in reduced echelon form (by lowest set bit).
// Supports incremental insertion, membership testing, and reduction.
class GF2RowSpace {
  public:
    explicit GF2RowSpace(size_t width) : width_(width) {}

    size_t width() const { return width_; }
    size_t rank() const { return rows_.size(); }

    // Reduces v against the stored rows (lowest-bit pivots).
    GF2Vector reduce(GF2Vector v) const;
    bool contains(const GF2Vector& v) const { return reduce(v).zero(); }
    // Inserts v if independent; returns true if the rank grew.
    bool insert(GF2Vector v);
    // Pivot column of each stored row.
    const std::vector<size_t>& pivots() const { return pivots_; }
    const std::vector<GF2Vector>& rows() const { return rows_; }
    // True iff column i is a pivot column.
    bool is_pivot(size_t i) const;

  private:
    size_t width_;
    std::vector<GF2Vector> rows_;    // each with a distinct leading bit
    std::vector<size_t> pivots_;     // leading bit of rows_[i]
};

// Dense matrix as a list of rows; used for kernel/solve on differential blocks.
struct GF2Matrix {
    size_t cols = 0;
    std::vector<GF2Vector> rows;

    void add_row(GF2Vector v) { rows.push_back(std::move(v)); }
    size_t rank() const;
    // Basis of { x : sum_i x_i * rows[i] = 0 } as vectors of length rows.size().
    std::vector<GF2Vector> kernel_basis() const;
    // One solution x of sum_i x_i * rows[i] = target, if any.
    std::optional<GF2Vector> solve(const GF2Vector& target) const;
};

}  // namespace rhoext
