#pragma once

#include <complex>
#include <ostream>
#include <vector>

#include "fuzzybox/grid.hpp"

namespace fuzzybox {

// Banded complex matrix attached to a Grid.  Entry (j,k) is stored when
// |j-k| <= bandwidth; band d holds A(j, j+d).
class BandedOperator {
  public:
    BandedOperator(const Grid& g, int bandwidth, bool hermitian_intent = false)
        : grid_(g), bw_(bandwidth), hermitian_intent_(hermitian_intent),
          data_((2 * bandwidth + 1) * static_cast<std::size_t>(g.n), {0.0, 0.0}) {
        if (bandwidth < 0 || bandwidth >= g.n)
            throw config_error("banded: bandwidth out of range");
    }

    static BandedOperator diagonal(const Grid& g, const std::vector<double>& diag) {
        if (static_cast<int>(diag.size()) != g.n)
            throw config_error("banded: diagonal length mismatch");
        BandedOperator op(g, 0, true);
        for (int j = 0; j < g.n; ++j) op.at(j, j) = diag[j];
        return op;
    }

    const Grid& grid() const { return grid_; }
    int bandwidth() const { return bw_; }
    int size() const { return grid_.n; }
    bool hermitian_intent() const { return hermitian_intent_; }

    bool in_band(int j, int k) const {
        return j >= 0 && k >= 0 && j < grid_.n && k < grid_.n && std::abs(j - k) <= bw_;
    }

    std::complex<double>& at(int j, int k) {
        if (!in_band(j, k)) throw config_error("banded: index outside band");
        return data_[idx(j, k)];
    }
    std::complex<double> get(int j, int k) const { return in_band(j, k) ? data_[idx(j, k)] : 0.0; }

    std::vector<std::complex<double>> apply(const std::vector<std::complex<double>>& x) const {
        if (static_cast<int>(x.size()) != grid_.n) throw config_error("banded: vector length mismatch");
        std::vector<std::complex<double>> y(grid_.n, {0.0, 0.0});
        for (int j = 0; j < grid_.n; ++j) {
            std::complex<double> s{0.0, 0.0};
            const int klo = std::max(0, j - bw_), khi = std::min(grid_.n - 1, j + bw_);
            for (int k = klo; k <= khi; ++k) s += data_[idx(j, k)] * x[k];
            y[j] = s;
        }
        return y;
    }

    WaveFunction apply(const WaveFunction& f) const {
        if (!(f.grid == grid_)) throw config_error("banded: operand grid mismatch");
        WaveFunction out(grid_);
        out.values = apply(f.values);
        return out;
    }

    BandedOperator adjoint() const {
        BandedOperator out(grid_, bw_, hermitian_intent_);
        for (int j = 0; j < grid_.n; ++j)
            for (int k = std::max(0, j - bw_); k <= std::min(grid_.n - 1, j + bw_); ++k)
                out.at(j, k) = std::conj(get(k, j));
        return out;
    }

    // (A + A^dagger)/2: exact Hermitization, used by the matrix builders so the
    // assembled operators are Hermitian to the last bit including boundary rows.
    void hermitize() {
        BandedOperator adj = adjoint();
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] = 0.5 * (data_[i] + adj.data_[i]);
        hermitian_intent_ = true;
    }

    // max_{stored j,k} |A(j,k) - conj(A(k,j))| / max |A|; 0 for exactly
    // Hermitian matrices, and the denominator guards the empty/zero case.
    double hermiticity_defect() const {
        double worst = 0.0, scale = 0.0;
        for (int j = 0; j < grid_.n; ++j)
            for (int k = std::max(0, j - bw_); k <= std::min(grid_.n - 1, j + bw_); ++k) {
                scale = std::max(scale, std::abs(get(j, k)));
                worst = std::max(worst, std::abs(get(j, k) - std::conj(get(k, j))));
            }
        return scale > 0.0 ? worst / scale : 0.0;
    }

    BandedOperator& scale(std::complex<double> factor) {
        for (auto& v : data_) v *= factor;
        return *this;
    }

    static BandedOperator add(const BandedOperator& A, const BandedOperator& B) {
        if (!(A.grid_ == B.grid_)) throw config_error("banded: grid mismatch in add");
        const int bw = std::max(A.bw_, B.bw_);
        BandedOperator C(A.grid_, bw, A.hermitian_intent_ && B.hermitian_intent_);
        for (int j = 0; j < A.grid_.n; ++j)
            for (int k = std::max(0, j - bw); k <= std::min(A.grid_.n - 1, j + bw); ++k)
                C.at(j, k) = A.get(j, k) + B.get(j, k);
        return C;
    }

    static BandedOperator multiply(const BandedOperator& A, const BandedOperator& B) {
        if (!(A.grid_ == B.grid_)) throw config_error("banded: grid mismatch in multiply");
        const int n = A.grid_.n;
        const int bw = std::min(A.bw_ + B.bw_, n - 1);
        BandedOperator C(A.grid_, bw, false);
        for (int j = 0; j < n; ++j) {
            const int klo = std::max(0, j - bw), khi = std::min(n - 1, j + bw);
            for (int k = klo; k <= khi; ++k) {
                std::complex<double> s{0.0, 0.0};
                const int mlo = std::max({0, j - A.bw_, k - B.bw_});
                const int mhi = std::min({n - 1, j + A.bw_, k + B.bw_});
                for (int m = mlo; m <= mhi; ++m) s += A.get(j, m) * B.get(m, k);
                C.at(j, k) = s;
            }
        }
        return C;
    }

    // Band dump: one row per stored entry, "row,col,x_row,real,imag".
    void write_csv(std::ostream& os) const;

  private:
    std::size_t idx(int j, int k) const {
        return static_cast<std::size_t>(k - j + bw_) * grid_.n + j;
    }

    Grid grid_;
    int bw_;
    bool hermitian_intent_;
    std::vector<std::complex<double>> data_;
};

} // namespace fuzzybox
