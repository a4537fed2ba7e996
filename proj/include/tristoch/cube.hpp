#ifndef TRISTOCH_CUBE_HPP
#define TRISTOCH_CUBE_HPP

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "tristoch/cells.hpp"
#include "tristoch/rational.hpp"

namespace tristoch {

// Exact n x n x n array, stored as the sorted sparse list of nonzero cells.
// Immutable after construction; cells absent from the support are zero.
class Cube {
  public:
    Cube() = default;
    Cube(int n, std::vector<std::pair<uint32_t, Rational>> entries)
        : n_(n), entries_(std::move(entries)) {
        if (n_ < 1) throw std::invalid_argument("cube side must be >= 1");
        std::sort(entries_.begin(), entries_.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (size_t t = 0; t + 1 < entries_.size(); ++t)
            if (entries_[t].first == entries_[t + 1].first)
                throw std::invalid_argument("duplicate cell in cube");
        std::erase_if(entries_, [](const auto& e) { return e.second == 0; });
    }

    int n() const { return n_; }
    size_t support_size() const { return entries_.size(); }
    const std::vector<std::pair<uint32_t, Rational>>& entries() const { return entries_; }

    const Rational& value(const Cell& c) const {
        check_cell(n_, c);
        uint32_t key = cell_key(n_, c);
        auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                                   [](const auto& e, uint32_t k) { return e.first < k; });
        if (it != entries_.end() && it->first == key) return it->second;
        return rat_zero();
    }

    std::vector<Cell> support_cells() const {
        std::vector<Cell> out;
        out.reserve(entries_.size());
        for (const auto& [key, v] : entries_) out.push_back(cell_from_key(n_, key));
        return out;
    }

    bool operator==(const Cube& other) const = default;

    // Incremental construction helper; build() canonicalizes.
    class Builder {
      public:
        explicit Builder(int n) : n_(n) {}
        void set(const Cell& c, Rational v) {
            check_cell(n_, c);
            if (v != 0) items_.emplace_back(cell_key(n_, c), std::move(v));
        }
        Cube build() && { return Cube(n_, std::move(items_)); }

      private:
        int n_;
        std::vector<std::pair<uint32_t, Rational>> items_;
    };

  private:
    int n_ = 1;
    std::vector<std::pair<uint32_t, Rational>> entries_;
};

// Member of the half-entry family: the support set of an array whose every
// nonzero entry is 1/2. Only the support is stored.
class HalfArray {
  public:
    HalfArray() = default;
    HalfArray(int n, std::vector<uint32_t> support) : n_(n), support_(std::move(support)) {
        if (n_ < 1) throw std::invalid_argument("half-array side must be >= 1");
        std::sort(support_.begin(), support_.end());
        for (size_t t = 0; t + 1 < support_.size(); ++t)
            if (support_[t] == support_[t + 1])
                throw std::invalid_argument("duplicate cell in half-array");
    }
    static HalfArray from_cells(int n, const std::vector<Cell>& cells) {
        std::vector<uint32_t> keys;
        keys.reserve(cells.size());
        for (const Cell& c : cells) {
            check_cell(n, c);
            keys.push_back(cell_key(n, c));
        }
        return HalfArray(n, std::move(keys));
    }

    int n() const { return n_; }
    size_t support_size() const { return support_.size(); }
    const std::vector<uint32_t>& support_keys() const { return support_; }
    bool contains(const Cell& c) const {
        uint32_t key = cell_key(n_, c);
        return std::binary_search(support_.begin(), support_.end(), key);
    }
    std::vector<Cell> support_cells() const {
        std::vector<Cell> out;
        out.reserve(support_.size());
        for (uint32_t key : support_) out.push_back(cell_from_key(n_, key));
        return out;
    }

    Cube to_cube() const {
        std::vector<std::pair<uint32_t, Rational>> entries;
        entries.reserve(support_.size());
        for (uint32_t key : support_) entries.emplace_back(key, rat_half());
        return Cube(n_, std::move(entries));
    }

    bool operator==(const HalfArray& other) const = default;

  private:
    int n_ = 1;
    std::vector<uint32_t> support_;
};

// Matrix of shaft sums of the slice of layers 1..top ("the construction seen
// from above").
struct ShaftView {
    int n = 0;
    int top = 0;                     // layers 1..top included
    std::vector<Rational> entries;   // row-major (i, j), size n*n

    const Rational& at(int i, int j) const { return entries[(i - 1) * n + (j - 1)]; }
};

struct CellClasses {
    int n = 0;
    std::vector<int8_t> doubled;  // 0, 1, 2 for 0-, 1/2-, 1-cells
    int at(int i, int j) const { return doubled[(i - 1) * n + (j - 1)]; }
};

// Classification of a shaft view into 0-, 1/2-, and 1-cells. Fails with the
// offending shaft when some entry is outside {0, 1/2, 1}.
std::optional<std::pair<int, int>> classify_cells(const ShaftView& view, CellClasses& out);

ShaftView shaft_view(const Cube& cube, int top);
ShaftView shaft_view(const HalfArray& h, int top);

struct Violation {
    enum class Kind { NegativeEntry, LineSum, LineSupportCount } kind;
    LineSpec line;       // offending line (LineSum / LineSupportCount)
    Cell cell;           // offending cell (NegativeEntry)
    Rational sum;        // actual line sum
    int support_count = 0;

    std::string to_string() const;
};

struct ValidationReport {
    bool ok = true;
    std::optional<Violation> violation;
};

// Membership test for the tristochastic polytope: all entries >= 0 and every
// one of the 3n^2 lines sums to exactly 1. The first violation in canonical
// line order (columns, rows, shafts) is reported.
ValidationReport validate_tristochastic(const Cube& cube);

// Membership test for the half-entry family: every line holds exactly two
// support cells.
ValidationReport validate_half_array(const HalfArray& h);

}  // namespace tristoch

#endif
