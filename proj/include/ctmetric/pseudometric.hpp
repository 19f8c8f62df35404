#pragma once

#include <cstddef>
#include <vector>

namespace ctmetric {

/**
 * Symmetric 1-bounded pseudometric on a finite point set.
 *
 * Entries live in [0,1], the diagonal is exactly zero and the triangle
 * inequality holds up to a small numerical slack (see validate()).
 */
class PseudometricTable {
  public:
    PseudometricTable() = default;
    explicit PseudometricTable(std::size_t size) : n_(size), m_(size * size, 0.0) {}

    /// Builds a table from a full row-major matrix and validates it.
    static PseudometricTable from_entries(std::size_t size, std::vector<double> entries,
                                          double triangle_tol = 1e-9);

    std::size_t size() const { return n_; }

    double operator()(std::size_t i, std::size_t j) const { return m_[i * n_ + j]; }

    /// Sets both (i,j) and (j,i); the diagonal is pinned to zero.
    void set(std::size_t i, std::size_t j, double value);

    /// Throws validation_error if any table invariant fails.
    void validate(double triangle_tol = 1e-9) const;

    /// Min-plus (shortest path) closure. Entries can only decrease; the
    /// result satisfies the triangle inequality exactly up to roundoff.
    void close_triangle();

    /// Sup-norm distance to another table of the same size.
    double sup_distance(const PseudometricTable& other) const;

    /// True if every entry of *this is >= the matching entry of other - tol.
    bool dominates(const PseudometricTable& other, double tol = 0.0) const;

    const std::vector<double>& entries() const { return m_; }

  private:
    std::size_t n_ = 0;
    std::vector<double> m_;
};

}  // namespace ctmetric
