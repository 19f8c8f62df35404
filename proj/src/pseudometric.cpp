#include "ctmetric/pseudometric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctmetric/errors.hpp"

namespace ctmetric {

PseudometricTable PseudometricTable::from_entries(std::size_t size, std::vector<double> entries,
                                                  double triangle_tol) {
    if (entries.size() != size * size)
        throw validation_error("pseudometric: entry count does not match size");
    PseudometricTable t;
    t.n_ = size;
    t.m_ = std::move(entries);
    t.validate(triangle_tol);
    return t;
}

void PseudometricTable::set(std::size_t i, std::size_t j, double value) {
    if (i == j) return;
    m_[i * n_ + j] = value;
    m_[j * n_ + i] = value;
}

void PseudometricTable::validate(double triangle_tol) const {
    for (std::size_t i = 0; i < n_; ++i) {
        if (m_[i * n_ + i] != 0.0)
            throw validation_error("pseudometric: diagonal entry (" + std::to_string(i) +
                                   ") is not exactly zero");
        for (std::size_t j = 0; j < n_; ++j) {
            const double v = m_[i * n_ + j];
            if (!(v >= 0.0 && v <= 1.0))
                throw validation_error("pseudometric: entry (" + std::to_string(i) + "," +
                                       std::to_string(j) + ") = " + std::to_string(v) +
                                       " outside [0,1]");
            if (m_[j * n_ + i] != v)
                throw validation_error("pseudometric: entries (" + std::to_string(i) + "," +
                                       std::to_string(j) + ") not symmetric");
        }
    }
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            for (std::size_t k = 0; k < n_; ++k)
                if (m_[i * n_ + k] > m_[i * n_ + j] + m_[j * n_ + k] + triangle_tol)
                    throw validation_error(
                        "pseudometric: triangle inequality violated on (" + std::to_string(i) +
                        "," + std::to_string(j) + "," + std::to_string(k) + ")");
}

void PseudometricTable::close_triangle() {
    for (std::size_t k = 0; k < n_; ++k)
        for (std::size_t i = 0; i < n_; ++i) {
            const double ik = m_[i * n_ + k];
            for (std::size_t j = 0; j < n_; ++j) {
                const double via = ik + m_[k * n_ + j];
                if (via < m_[i * n_ + j]) m_[i * n_ + j] = via;
            }
        }
    // Symmetrize against asymmetric roundoff in the sweep order.
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double v = std::min(m_[i * n_ + j], m_[j * n_ + i]);
            m_[i * n_ + j] = v;
            m_[j * n_ + i] = v;
        }
}

double PseudometricTable::sup_distance(const PseudometricTable& other) const {
    double d = 0.0;
    for (std::size_t k = 0; k < m_.size(); ++k) d = std::max(d, std::abs(m_[k] - other.m_[k]));
    return d;
}

bool PseudometricTable::dominates(const PseudometricTable& other, double tol) const {
    for (std::size_t k = 0; k < m_.size(); ++k)
        if (m_[k] < other.m_[k] - tol) return false;
    return true;
}

}  // namespace ctmetric
