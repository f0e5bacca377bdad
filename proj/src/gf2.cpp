#include "rhoext/gf2.hpp"

#include <algorithm>
#include <bit>

namespace rhoext {

std::optional<size_t> GF2Vector::leading() const {
    for (size_t w = 0; w < words_.size(); ++w)
        if (words_[w]) return w * 64 + std::countr_zero(words_[w]);
    return std::nullopt;
}

GF2Vector GF2RowSpace::reduce(GF2Vector v) const {
    // Rows are fully reduced (each pivot cleared from every other row) and
    // sorted by pivot, so a single ascending pass suffices.
    for (size_t i = 0; i < rows_.size(); ++i)
        if (v.get(pivots_[i])) v ^= rows_[i];
    return v;
}

bool GF2RowSpace::insert(GF2Vector v) {
    v = reduce(std::move(v));
    auto lead = v.leading();
    if (!lead) return false;
    // Clear the new pivot from existing rows to stay fully reduced.
    for (size_t i = 0; i < rows_.size(); ++i)
        if (rows_[i].get(*lead)) rows_[i] ^= v;
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), *lead) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, *lead);
    rows_.insert(rows_.begin() + pos, std::move(v));
    return true;
}

bool GF2RowSpace::is_pivot(size_t i) const {
    return std::binary_search(pivots_.begin(), pivots_.end(), i);
}

size_t GF2Matrix::rank() const {
    GF2RowSpace space(cols);
    for (const auto& r : rows) space.insert(r);
    return space.rank();
}

namespace {

// Fully reduced row space that also tracks, for each stored row, which
// combination of the inserted rows produced it.
struct TrackedSpace {
    size_t n_inputs;
    std::vector<GF2Vector> rows;
    std::vector<GF2Vector> combos;
    std::vector<size_t> pivots;

    explicit TrackedSpace(size_t n) : n_inputs(n) {}

    // Reduces (v, combo) in place against the stored rows.
    void reduce(GF2Vector& v, GF2Vector& combo) const {
        for (size_t i = 0; i < rows.size(); ++i)
            if (v.get(pivots[i])) {
                v ^= rows[i];
                combo ^= combos[i];
            }
    }

    // Returns false (leaving the combo describing a dependency) if v reduced
    // to zero; otherwise stores the row.
    bool insert(GF2Vector v, GF2Vector combo) {
        reduce(v, combo);
        auto lead = v.leading();
        if (!lead) {
            last_dependency = std::move(combo);
            return false;
        }
        for (size_t i = 0; i < rows.size(); ++i)
            if (rows[i].get(*lead)) {
                rows[i] ^= v;
                combos[i] ^= combo;
            }
        auto pos = std::lower_bound(pivots.begin(), pivots.end(), *lead) - pivots.begin();
        pivots.insert(pivots.begin() + pos, *lead);
        rows.insert(rows.begin() + pos, std::move(v));
        combos.insert(combos.begin() + pos, std::move(combo));
        return true;
    }

    GF2Vector last_dependency;
};

}  // namespace

std::vector<GF2Vector> GF2Matrix::kernel_basis() const {
    TrackedSpace space(rows.size());
    std::vector<GF2Vector> kernel;
    for (size_t i = 0; i < rows.size(); ++i) {
        GF2Vector combo(rows.size());
        combo.set(i);
        if (!space.insert(rows[i], std::move(combo)))
            kernel.push_back(space.last_dependency);
    }
    return kernel;
}

std::optional<GF2Vector> GF2Matrix::solve(const GF2Vector& target) const {
    TrackedSpace space(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        GF2Vector combo(rows.size());
        combo.set(i);
        space.insert(rows[i], std::move(combo));
    }
    GF2Vector t = target;
    GF2Vector combo(rows.size());
    space.reduce(t, combo);
    if (!t.zero()) return std::nullopt;
    return combo;
}

}  // namespace rhoext
