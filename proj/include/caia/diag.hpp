// Entrywise algebra of tau x tau diagonal complex matrices, the building
// block of diagonal channel extensions.

#ifndef CAIA_DIAG_HPP
#define CAIA_DIAG_HPP

#include <complex>
#include <stdexcept>
#include <vector>
#include <Eigen/Dense>

namespace caia {

using Complex = std::complex<double>;

struct DiagError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// |a - b| <= eps * max(|a|, |b|); both zero counts as equal.
inline bool rel_close(Complex a, Complex b, double eps) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale == 0.0) return true;
    return std::abs(a - b) <= eps * scale;
}

class DiagonalMatrix {
  public:
    DiagonalMatrix() = default;
    explicit DiagonalMatrix(std::vector<Complex> entries) : entries_(std::move(entries)) {}

    static DiagonalMatrix identity(int size) {
        return DiagonalMatrix(std::vector<Complex>(size, Complex(1, 0)));
    }

    int size() const { return static_cast<int>(entries_.size()); }
    Complex operator()(int i) const { return entries_.at(i); }
    Complex& operator()(int i) { return entries_.at(i); }
    const std::vector<Complex>& entries() const { return entries_; }

    DiagonalMatrix operator*(const DiagonalMatrix& rhs) const {
        check_size(rhs);
        DiagonalMatrix out(*this);
        for (int i = 0; i < size(); ++i) out.entries_[i] *= rhs.entries_[i];
        return out;
    }

    bool invertible() const {
        for (const auto& e : entries_)
            if (e == Complex(0, 0)) return false;
        return true;
    }

    DiagonalMatrix inverse() const {
        DiagonalMatrix out(*this);
        for (auto& e : out.entries_) {
            if (e == Complex(0, 0)) throw DiagError("singular diagonal matrix");
            e = Complex(1, 0) / e;
        }
        return out;
    }

    bool approx_equal(const DiagonalMatrix& rhs, double eps) const {
        if (rhs.size() != size()) return false;
        for (int i = 0; i < size(); ++i)
            if (!rel_close(entries_[i], rhs.entries_[i], eps)) return false;
        return true;
    }

    /// Left-multiplies a tall matrix: row i scaled by the i-th diagonal entry.
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& m) const {
        if (m.rows() != size()) throw DiagError("diagonal/matrix size mismatch");
        Eigen::MatrixXcd out = m;
        for (int i = 0; i < size(); ++i) out.row(i) *= entries_[i];
        return out;
    }

  private:
    void check_size(const DiagonalMatrix& rhs) const {
        if (rhs.size() != size()) throw DiagError("diagonal size mismatch");
    }

    std::vector<Complex> entries_;
};

}  // namespace caia

#endif
