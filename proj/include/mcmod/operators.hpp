#pragma once

// Structured matrices of the generic multicarrier modulator.
//
// Every builder returns an immutable OperatorMatrix that keeps a compact
// description of its structure (index map, diagonal, circulant column,
// DFT-like phase rule) and can either be materialized with dense() or
// applied directly through the index-mapped path (apply, apply_right,
// hadamard). Both paths produce identical results; the tests compare them.
//
// All indices are 0-based.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "mcmod/types.hpp"

namespace mcmod {

enum class OperatorRole {
    CyclicExtension,
    Upsampler,
    ZeroStuffer,
    CirculantFilter,
    Modulation,
    Decimator,
    Window,
    Commutator,
    Multiplexer,
};

inline const char* to_string(OperatorRole role) {
    switch (role) {
        case OperatorRole::CyclicExtension: return "cyclic-extension";
        case OperatorRole::Upsampler: return "upsampler";
        case OperatorRole::ZeroStuffer: return "zero-stuffer";
        case OperatorRole::CirculantFilter: return "circulant-filter";
        case OperatorRole::Modulation: return "modulation";
        case OperatorRole::Decimator: return "decimator";
        case OperatorRole::Window: return "window";
        case OperatorRole::Commutator: return "commutator";
        case OperatorRole::Multiplexer: return "multiplexer";
    }
    return "unknown";
}

/// exp(sign * 2*pi*j * mod(k*m, period) / period), reducing the exponent
/// before the transcendental call so large k*m keep full precision.
template <typename Real>
Complex<Real> unit_phase(Index k, Index m, Index period, int sign) {
    const Index r = mod(k * m, period);
    const Real angle = Real(2) * std::numbers::pi_v<Real> * static_cast<Real>(r) / static_cast<Real>(period);
    return std::polar(Real(1), static_cast<Real>(sign) * angle);
}

template <typename Real = double>
class OperatorMatrix {
  public:
    using Scalar = Complex<Real>;
    using Matrix = CMatrix<Real>;
    using Vector = CVector<Real>;

    OperatorRole role() const { return role_; }
    Index rows() const { return rows_; }
    Index cols() const { return cols_; }

    /// Entry (i, j) evaluated from the structured description.
    Scalar coeff(Index i, Index j) const {
        switch (kind_) {
            case Kind::Selection:
                return selected_[static_cast<std::size_t>(i)] == j ? Scalar(1) : Scalar(0);
            case Kind::Diagonal:
                return i == j ? diagonal_(i) : Scalar(0);
            case Kind::Circulant: {
                const Index d = mod(i - j, rows_);
                return d < taps_.size() ? taps_(d) : Scalar(0);
            }
            case Kind::Phase:
                return unit_phase<Real>(i, j, channels_, conjugate_ ? -1 : 1);
            case Kind::General:
                return general_(i, j);
        }
        return Scalar(0);
    }

    Matrix dense() const {
        if (kind_ == Kind::General) return general_;
        Matrix out = Matrix::Zero(rows_, cols_);
        switch (kind_) {
            case Kind::Selection:
                for (Index r = 0; r < rows_; ++r) {
                    const Index c = selected_[static_cast<std::size_t>(r)];
                    if (c >= 0) out(r, c) = Scalar(1);
                }
                break;
            case Kind::Diagonal:
                out.diagonal() = diagonal_;
                break;
            default:
                for (Index j = 0; j < cols_; ++j)
                    for (Index i = 0; i < rows_; ++i) out(i, j) = coeff(i, j);
                break;
        }
        return out;
    }

    /// this * x through the structured path.
    Matrix apply(const Matrix& x) const {
        if (x.rows() != cols_)
            throw InvalidArgument(std::string(to_string(role_)) + ": operand has " + std::to_string(x.rows()) +
                                  " rows, expected " + std::to_string(cols_));
        switch (kind_) {
            case Kind::Selection: {
                Matrix out = Matrix::Zero(rows_, x.cols());
                for (Index r = 0; r < rows_; ++r) {
                    const Index c = selected_[static_cast<std::size_t>(r)];
                    if (c >= 0) out.row(r) = x.row(c);
                }
                return out;
            }
            case Kind::Diagonal:
                return diagonal_.asDiagonal() * x;
            case Kind::Circulant: {
                Matrix out = Matrix::Zero(rows_, x.cols());
                for (Index col = 0; col < x.cols(); ++col)
                    for (Index n = 0; n < rows_; ++n) {
                        Scalar acc(0);
                        for (Index d = 0; d < taps_.size(); ++d) acc += taps_(d) * x(mod(n - d, rows_), col);
                        out(n, col) = acc;
                    }
                return out;
            }
            default:
                return dense() * x;
        }
    }

    /// x * this through the structured path.
    Matrix apply_right(const Matrix& x) const {
        if (x.cols() != rows_)
            throw InvalidArgument(std::string(to_string(role_)) + ": operand has " + std::to_string(x.cols()) +
                                  " columns, expected " + std::to_string(rows_));
        switch (kind_) {
            case Kind::Selection: {
                Matrix out = Matrix::Zero(x.rows(), cols_);
                for (Index r = 0; r < rows_; ++r) {
                    const Index c = selected_[static_cast<std::size_t>(r)];
                    if (c >= 0) out.col(c) += x.col(r);
                }
                return out;
            }
            case Kind::Diagonal:
                return x * diagonal_.asDiagonal();
            case Kind::General:
                return x * general_;
            default:
                return x * dense();
        }
    }

    /// this ∘ x, or conj(this) ∘ x when conjugated is set.
    Matrix hadamard(const Matrix& x, bool conjugated = false) const {
        if (x.rows() != rows_ || x.cols() != cols_)
            throw InvalidArgument(std::string(to_string(role_)) + ": Hadamard operand is " + std::to_string(x.rows()) +
                                  "x" + std::to_string(x.cols()) + ", expected " + std::to_string(rows_) + "x" +
                                  std::to_string(cols_));
        Matrix out(rows_, cols_);
        for (Index j = 0; j < cols_; ++j)
            for (Index i = 0; i < rows_; ++i) {
                const Scalar v = coeff(i, j);
                out(i, j) = (conjugated ? std::conj(v) : v) * x(i, j);
            }
        return out;
    }

    template <typename R>
    friend OperatorMatrix<R> build_cyclic_extension(Index, Index, Index, Index, Index);
    template <typename R>
    friend OperatorMatrix<R> build_upsampler(Index, Index, Index);
    template <typename R>
    friend OperatorMatrix<R> build_zero_stuffer(Index, Index);
    template <typename R>
    friend OperatorMatrix<R> build_circulant_filter(const CVector<R>&, Index);
    template <typename R>
    friend OperatorMatrix<R> build_modulation_matrix(Index, Index, bool);
    template <typename R>
    friend OperatorMatrix<R> build_decimator(Index, Index, Index);
    template <typename R>
    friend OperatorMatrix<R> build_window(const CVector<R>&, Index);
    template <typename R>
    friend OperatorMatrix<R> build_commutator(std::span<const Index>, Index);
    template <typename R>
    friend OperatorMatrix<R> build_multiplexer(const CMatrix<R>&);

  private:
    enum class Kind { Selection, Diagonal, Circulant, Phase, General };

    OperatorMatrix(OperatorRole role, Kind kind, Index rows, Index cols)
        : role_(role), kind_(kind), rows_(rows), cols_(cols) {}

    OperatorRole role_;
    Kind kind_;
    Index rows_;
    Index cols_;
    std::vector<Index> selected_;  // Selection: column of the single 1 in each row, -1 for a zero row
    Vector diagonal_;              // Diagonal
    Vector taps_;                  // Circulant: first column up to the filter support
    Index channels_ = 1;           // Phase
    bool conjugate_ = false;       // Phase
    Matrix general_;               // General
};

/// Stacked [0; [0 I_cp]; I_core; [I_cs 0]; 0] prefix/suffix insertion matrix.
template <typename Real = double>
OperatorMatrix<Real> build_cyclic_extension(Index n_zp, Index n_cp, Index n_core, Index n_cs, Index n_zs) {
    if (n_zp < 0 || n_cp < 0 || n_cs < 0 || n_zs < 0 || n_core < 1)
        throw InvalidArgument("cyclic extension: lengths must be non-negative and the core at least 1");
    if (n_cp > n_core) throw InvalidArgument("cyclic extension: cyclic prefix longer than the frame");
    if (n_cs > n_core) throw InvalidArgument("cyclic extension: cyclic suffix longer than the frame");
    const Index rows = n_zp + n_cp + n_core + n_cs + n_zs;
    OperatorMatrix<Real> op(OperatorRole::CyclicExtension, OperatorMatrix<Real>::Kind::Selection, rows, n_core);
    op.selected_.assign(static_cast<std::size_t>(rows), -1);
    Index r = n_zp;
    for (Index i = 0; i < n_cp; ++i) op.selected_[static_cast<std::size_t>(r++)] = n_core - n_cp + i;
    for (Index i = 0; i < n_core; ++i) op.selected_[static_cast<std::size_t>(r++)] = i;
    for (Index i = 0; i < n_cs; ++i) op.selected_[static_cast<std::size_t>(r++)] = i;
    return op;
}

/// (n_s*L) x n_s upsampler; input sample u lands on row L*u + offset.
template <typename Real = double>
OperatorMatrix<Real> build_upsampler(Index factor, Index offset, Index n_s) {
    if (factor < 1) throw InvalidArgument("upsampler: factor must be >= 1");
    if (n_s < 1) throw InvalidArgument("upsampler: input length must be >= 1");
    if (offset < 0 || offset >= factor) throw InvalidArgument("upsampler: offset must lie in [0, L)");
    OperatorMatrix<Real> op(OperatorRole::Upsampler, OperatorMatrix<Real>::Kind::Selection, n_s * factor, n_s);
    op.selected_.assign(static_cast<std::size_t>(n_s * factor), -1);
    for (Index u = 0; u < n_s; ++u) op.selected_[static_cast<std::size_t>(factor * u + offset)] = u;
    return op;
}

/// [I_{n_in}; 0] padding an upsampled frame to the circular period.
template <typename Real = double>
OperatorMatrix<Real> build_zero_stuffer(Index n_c, Index n_in) {
    if (n_in < 1) throw InvalidArgument("zero stuffer: input length must be >= 1");
    if (n_c < n_in)
        throw InvalidArgument("zero stuffer: information loss, circular period " + std::to_string(n_c) +
                              " is shorter than the upsampled frame " + std::to_string(n_in));
    OperatorMatrix<Real> op(OperatorRole::ZeroStuffer, OperatorMatrix<Real>::Kind::Selection, n_c, n_in);
    op.selected_.assign(static_cast<std::size_t>(n_c), -1);
    for (Index i = 0; i < n_in; ++i) op.selected_[static_cast<std::size_t>(i)] = i;
    return op;
}

/// n_c x n_c circulant whose first column is h zero-padded to n_c.
template <typename Real = double>
OperatorMatrix<Real> build_circulant_filter(const CVector<Real>& h, Index n_c) {
    if (h.size() < 1) throw InvalidArgument("circulant filter: empty impulse response");
    if (h.size() > n_c)
        throw InvalidArgument("circulant filter: filter length " + std::to_string(h.size()) +
                              " exceeds the circular period " + std::to_string(n_c));
    OperatorMatrix<Real> op(OperatorRole::CirculantFilter, OperatorMatrix<Real>::Kind::Circulant, n_c, n_c);
    op.taps_ = h;
    return op;
}

/// n_c x m_ch DFT-like matrix, entry (k, m) = exp(2*pi*j*k*m*(-1)^conj / m_ch).
template <typename Real = double>
OperatorMatrix<Real> build_modulation_matrix(Index n_c, Index m_ch, bool conjugate) {
    if (n_c < 1 || m_ch < 1) throw InvalidArgument("modulation matrix: dimensions must be >= 1");
    OperatorMatrix<Real> op(OperatorRole::Modulation, OperatorMatrix<Real>::Kind::Phase, n_c, m_ch);
    op.channels_ = m_ch;
    op.conjugate_ = conjugate;
    return op;
}

/// floor(n_c/Q) x n_c decimator; row r keeps input sample Q*r + offset.
template <typename Real = double>
OperatorMatrix<Real> build_decimator(Index factor, Index offset, Index n_c) {
    if (factor < 1) throw InvalidArgument("decimator: factor must be >= 1");
    if (n_c < 1) throw InvalidArgument("decimator: input length must be >= 1");
    if (offset < 0 || offset >= factor) throw InvalidArgument("decimator: offset must lie in [0, Q)");
    const Index rows = n_c / factor;
    OperatorMatrix<Real> op(OperatorRole::Decimator, OperatorMatrix<Real>::Kind::Selection, rows, n_c);
    op.selected_.resize(static_cast<std::size_t>(rows));
    for (Index r = 0; r < rows; ++r) op.selected_[static_cast<std::size_t>(r)] = factor * r + offset;
    return op;
}

/// Diagonal window, zero-padded to n_target.
template <typename Real = double>
OperatorMatrix<Real> build_window(const CVector<Real>& w, Index n_target) {
    if (w.size() > n_target)
        throw InvalidArgument("window: " + std::to_string(w.size()) + " samples exceed the target length " +
                              std::to_string(n_target));
    OperatorMatrix<Real> op(OperatorRole::Window, OperatorMatrix<Real>::Kind::Diagonal, n_target, n_target);
    op.diagonal_ = CVector<Real>::Zero(n_target);
    op.diagonal_.head(w.size()) = w;
    return op;
}

/// M' x m_ch 0-1 commutator: row m has its 1 at column e[m].
template <typename Real = double>
OperatorMatrix<Real> build_commutator(std::span<const Index> e, Index m_ch) {
    if (e.empty()) throw InvalidArgument("commutator: empty channel map");
    std::vector<bool> used(static_cast<std::size_t>(std::max<Index>(m_ch, 0)), false);
    for (const Index k : e) {
        if (k < 0 || k >= m_ch)
            throw InvalidArgument("commutator: channel " + std::to_string(k) + " outside [0, " + std::to_string(m_ch) +
                                  ")");
        if (used[static_cast<std::size_t>(k)])
            throw InvalidArgument("commutator: channel " + std::to_string(k) + " assigned twice");
        used[static_cast<std::size_t>(k)] = true;
    }
    OperatorMatrix<Real> op(OperatorRole::Commutator, OperatorMatrix<Real>::Kind::Selection,
                            static_cast<Index>(e.size()), m_ch);
    op.selected_.assign(e.begin(), e.end());
    return op;
}

/// Wraps a general routing matrix (E2, E3, or a stream combiner).
template <typename Real = double>
OperatorMatrix<Real> build_multiplexer(const CMatrix<Real>& routing) {
    OperatorMatrix<Real> op(OperatorRole::Multiplexer, OperatorMatrix<Real>::Kind::General, routing.rows(),
                            routing.cols());
    op.general_ = routing;
    return op;
}

/// Causal-delay compensation; entry m = exp(-pi*j*m*(K0-1)*cas / m_ch).
template <typename Real = double>
struct PhaseVector {
    CVector<Real> entries;

    Index size() const { return entries.size(); }
    auto as_diagonal() const { return entries.asDiagonal(); }
};

template <typename Real = double>
PhaseVector<Real> build_phase_vector(Index m_ch, Index filter_length, bool causal) {
    if (m_ch < 1) throw InvalidArgument("phase vector: channel count must be >= 1");
    if (filter_length < 1) throw InvalidArgument("phase vector: filter length must be >= 1");
    PhaseVector<Real> c{CVector<Real>::Ones(m_ch)};
    if (!causal) return c;
    // exp(-pi j m (K0-1)/M) = exp(-2 pi j m (K0-1) / (2M)); reduce mod 2M.
    for (Index m = 0; m < m_ch; ++m) c.entries(m) = unit_phase<Real>(m, filter_length - 1, 2 * m_ch, -1);
    return c;
}

}  // namespace mcmod
