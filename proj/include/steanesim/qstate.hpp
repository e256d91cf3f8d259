// Copyright 2026 The steanesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense pure-state and density-matrix engine.
//
// Bit convention: qubit 0 is the least-significant bit of a flat basis
// index. A density matrix is stored row-major, so entry (r, c) lives at
// flat position r * dim + c. Viewed as a vector over 2n "virtual" qubits,
// column bits are virtual qubits 0..n-1 and row bits are n..2n-1; every
// kernel below works on that view and never builds a full gate matrix.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace steanesim {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>;  // row-major {m00, m01, m10, m11}

inline constexpr int kMaxQubits = 14;

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

enum class GateKind { H, P, Pdag, T, Tdag, X, Y, Z, S, Sdag, CNOT, PrepZero, MeasureZ };

inline std::string_view to_string(GateKind k) {
    switch (k) {
        case GateKind::H: return "H";
        case GateKind::P: return "P";
        case GateKind::Pdag: return "Pdag";
        case GateKind::T: return "T";
        case GateKind::Tdag: return "Tdag";
        case GateKind::X: return "X";
        case GateKind::Y: return "Y";
        case GateKind::Z: return "Z";
        case GateKind::S: return "S";
        case GateKind::Sdag: return "Sdag";
        case GateKind::CNOT: return "CNOT";
        case GateKind::PrepZero: return "PrepZero";
        case GateKind::MeasureZ: return "MeasureZ";
    }
    return "?";
}

inline bool is_unitary(GateKind k) { return k != GateKind::PrepZero && k != GateKind::MeasureZ; }

/// One circuit instruction. For CNOT, qubits = {control, target}; every other
/// kind uses qubits[0] only.
struct GateOp {
    GateKind kind = GateKind::H;
    std::array<int, 2> qubits{0, -1};

    static GateOp single(GateKind k, int q) { return {k, {q, -1}}; }
    static GateOp cnot(int control, int target) { return {GateKind::CNOT, {control, target}}; }

    int arity() const { return kind == GateKind::CNOT ? 2 : 1; }
    int control() const { return qubits[0]; }
    int target() const { return kind == GateKind::CNOT ? qubits[1] : qubits[0]; }

    bool operator==(const GateOp&) const = default;
};

using Circuit = std::vector<GateOp>;

/// One op per line: kind followed by its qubit indices.
inline std::string dump_circuit(const Circuit& circuit) {
    std::string out;
    for (const auto& op : circuit) {
        out += to_string(op.kind);
        out += ' ';
        out += std::to_string(op.qubits[0]);
        if (op.arity() == 2) {
            out += ' ';
            out += std::to_string(op.qubits[1]);
        }
        out += '\n';
    }
    return out;
}

namespace gates {

inline const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

/// 2x2 matrix of a single-qubit unitary kind.
inline Mat2 matrix(GateKind k) {
    const cplx i{0.0, 1.0};
    const cplx w = std::polar(1.0, std::numbers::pi / 4.0);
    switch (k) {
        case GateKind::H: return {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2};
        case GateKind::P:
        case GateKind::S: return {1.0, 0.0, 0.0, i};
        case GateKind::Pdag:
        case GateKind::Sdag: return {1.0, 0.0, 0.0, -i};
        case GateKind::T: return {1.0, 0.0, 0.0, w};
        case GateKind::Tdag: return {1.0, 0.0, 0.0, std::conj(w)};
        case GateKind::X: return {0.0, 1.0, 1.0, 0.0};
        case GateKind::Y: return {0.0, -i, i, 0.0};
        case GateKind::Z: return {1.0, 0.0, 0.0, -1.0};
        default: break;
    }
    throw UsageError("gate kind " + std::string(to_string(k)) + " has no single-qubit matrix");
}

inline Mat2 conj(const Mat2& m) { return {std::conj(m[0]), std::conj(m[1]), std::conj(m[2]), std::conj(m[3])}; }

inline Mat2 multiply(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

}  // namespace gates

namespace kernel {

/// Applies m to virtual qubit q of a flat amplitude vector.
inline void apply_1q(std::span<cplx> v, int q, const Mat2& m) {
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t n = v.size();
    const bool diagonal = m[1] == cplx{} && m[2] == cplx{};
    for (std::size_t base = 0; base < n; base += 2 * stride) {
        for (std::size_t k = base; k < base + stride; ++k) {
            cplx& a0 = v[k];
            cplx& a1 = v[k + stride];
            if (diagonal) {
                a0 *= m[0];
                a1 *= m[3];
            } else {
                const cplx x0 = a0;
                const cplx x1 = a1;
                a0 = m[0] * x0 + m[1] * x1;
                a1 = m[2] * x0 + m[3] * x1;
            }
        }
    }
}

/// Permutation |c,t> -> |c, t xor c> on virtual qubits.
inline void apply_cnot(std::span<cplx> v, int control, int target) {
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if ((k & cmask) && !(k & tmask)) std::swap(v[k], v[k | tmask]);
    }
}

}  // namespace kernel

inline void check_qubit_count(int n) {
    if (n < 1) throw UsageError("qubit count must be at least 1, got " + std::to_string(n));
    if (n > kMaxQubits)
        throw CapacityError("qubit count " + std::to_string(n) + " exceeds cap of " + std::to_string(kMaxQubits));
}

class PureState {
public:
    explicit PureState(int num_qubits) : n_(num_qubits) {
        check_qubit_count(num_qubits);
        amps_.assign(std::size_t{1} << num_qubits, cplx{});
        amps_[0] = 1.0;
    }

    PureState(int num_qubits, std::vector<cplx> amplitudes) : n_(num_qubits), amps_(std::move(amplitudes)) {
        check_qubit_count(num_qubits);
        if (amps_.size() != (std::size_t{1} << num_qubits))
            throw UsageError("amplitude count does not match 2^num_qubits");
    }

    /// Single-qubit state cos(alpha)|0> + e^{i beta} sin(alpha)|1>.
    static PureState single_qubit(double alpha, double beta) {
        return PureState(1, {std::cos(alpha), std::sin(alpha) * std::exp(cplx{0.0, beta})});
    }

    int num_qubits() const { return n_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const cplx> amplitudes() const { return amps_; }
    std::span<cplx> amplitudes() { return amps_; }
    cplx operator[](std::size_t i) const { return amps_[i]; }
    cplx& operator[](std::size_t i) { return amps_[i]; }

    double norm_squared() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return s;
    }

    void normalize() {
        const double s = std::sqrt(norm_squared());
        if (s == 0.0) throw UsageError("cannot normalize a zero vector");
        for (auto& a : amps_) a /= s;
    }

    void check_qubit(int q) const {
        if (q < 0 || q >= n_)
            throw UsageError("qubit index " + std::to_string(q) + " out of range for " + std::to_string(n_) +
                             "-qubit state");
    }

    void apply_matrix(int q, const Mat2& m) {
        check_qubit(q);
        kernel::apply_1q(amps_, q, m);
    }

    /// Probability of reading 1 on qubit q.
    double probability_one(int q) const {
        check_qubit(q);
        const std::size_t mask = std::size_t{1} << q;
        double p = 0.0;
        for (std::size_t k = 0; k < amps_.size(); ++k)
            if (k & mask) p += std::norm(amps_[k]);
        return p;
    }

    /// Projects qubit q onto |outcome>, removes it from the register and
    /// renormalizes. Returns the probability of that outcome before projection.
    double collapse_and_remove(int q, int outcome) {
        check_qubit(q);
        if (n_ == 1) throw UsageError("cannot remove the last qubit of a register");
        const std::size_t low = (std::size_t{1} << q) - 1;
        std::vector<cplx> out(amps_.size() / 2);
        double p = 0.0;
        for (std::size_t k = 0; k < out.size(); ++k) {
            const std::size_t full = ((k & ~low) << 1) | (k & low) | (static_cast<std::size_t>(outcome) << q);
            out[k] = amps_[full];
            p += std::norm(out[k]);
        }
        if (p == 0.0) throw UsageError("collapse onto a zero-probability outcome");
        const double s = 1.0 / std::sqrt(p);
        for (auto& a : out) a *= s;
        amps_ = std::move(out);
        --n_;
        return p;
    }

    /// Kronecker product with this state's qubits as the low-order indices.
    PureState tensor(const PureState& high) const {
        check_qubit_count(n_ + high.n_);
        std::vector<cplx> out(amps_.size() * high.amps_.size());
        for (std::size_t h = 0; h < high.amps_.size(); ++h)
            for (std::size_t l = 0; l < amps_.size(); ++l) out[(h << n_) | l] = amps_[l] * high.amps_[h];
        return PureState(n_ + high.n_, std::move(out));
    }

    cplx inner(const PureState& other) const {
        if (other.n_ != n_) throw UsageError("inner product of states with different qubit counts");
        cplx s{};
        for (std::size_t k = 0; k < amps_.size(); ++k) s += std::conj(amps_[k]) * other.amps_[k];
        return s;
    }

private:
    int n_;
    std::vector<cplx> amps_;
};

class DensityMatrix {
public:
    /// |0...0><0...0| on num_qubits qubits.
    explicit DensityMatrix(int num_qubits) : n_(num_qubits) {
        check_qubit_count(num_qubits);
        const std::size_t d = std::size_t{1} << num_qubits;
        entries_.assign(d * d, cplx{});
        entries_[0] = 1.0;
    }

    DensityMatrix(int num_qubits, std::vector<cplx> entries) : n_(num_qubits), entries_(std::move(entries)) {
        check_qubit_count(num_qubits);
        const std::size_t d = std::size_t{1} << num_qubits;
        if (entries_.size() != d * d) throw UsageError("entry count does not match 4^num_qubits");
    }

    static DensityMatrix zero(int num_qubits) {
        DensityMatrix r(num_qubits);
        r.entries_[0] = 0.0;
        return r;
    }

    static DensityMatrix from_pure(const PureState& psi) {
        const std::size_t d = psi.dim();
        std::vector<cplx> e(d * d);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) e[r * d + c] = psi[r] * std::conj(psi[c]);
        return DensityMatrix(psi.num_qubits(), std::move(e));
    }

    static DensityMatrix maximally_mixed(int num_qubits) {
        DensityMatrix r = zero(num_qubits);
        const double v = 1.0 / static_cast<double>(r.dim());
        for (std::size_t k = 0; k < r.dim(); ++k) r(k, k) = v;
        return r;
    }

    int num_qubits() const { return n_; }
    std::size_t dim() const { return std::size_t{1} << n_; }
    std::span<const cplx> entries() const { return entries_; }
    std::span<cplx> entries() { return entries_; }

    cplx operator()(std::size_t r, std::size_t c) const { return entries_[r * dim() + c]; }
    cplx& operator()(std::size_t r, std::size_t c) { return entries_[r * dim() + c]; }

    double trace() const {
        double t = 0.0;
        for (std::size_t k = 0; k < dim(); ++k) t += entries_[k * dim() + k].real();
        return t;
    }

    double hermiticity_error() const {
        double e = 0.0;
        for (std::size_t r = 0; r < dim(); ++r)
            for (std::size_t c = r; c < dim(); ++c) e = std::max(e, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        return e;
    }

    void check_qubit(int q) const {
        if (q < 0 || q >= n_)
            throw UsageError("qubit index " + std::to_string(q) + " out of range for " + std::to_string(n_) +
                             "-qubit state");
    }

    /// rho -> M rho M^dagger on qubit q.
    void conjugate(int q, const Mat2& m) {
        check_qubit(q);
        kernel::apply_1q(entries_, n_ + q, m);
        kernel::apply_1q(entries_, q, gates::conj(m));
    }

    void scale(double s) {
        for (auto& e : entries_) e *= s;
    }

    DensityMatrix& operator+=(const DensityMatrix& o) {
        if (o.n_ != n_) throw UsageError("adding density matrices of different sizes");
        for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
        return *this;
    }

    /// Adds w * o.
    void accumulate(const DensityMatrix& o, double w) {
        if (o.n_ != n_) throw UsageError("adding density matrices of different sizes");
        for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += w * o.entries_[k];
    }

    double max_abs_diff(const DensityMatrix& o) const {
        if (o.n_ != n_) throw UsageError("comparing density matrices of different sizes");
        double e = 0.0;
        for (std::size_t k = 0; k < entries_.size(); ++k) e = std::max(e, std::abs(entries_[k] - o.entries_[k]));
        return e;
    }

private:
    int n_;
    std::vector<cplx> entries_;
};

namespace detail {

inline void check_op(int n, const GateOp& op) {
    auto in_range = [n](int q) { return q >= 0 && q < n; };
    if (!in_range(op.qubits[0]))
        throw UsageError("qubit index " + std::to_string(op.qubits[0]) + " out of range for " + std::to_string(n) +
                         "-qubit state");
    if (op.arity() == 2) {
        if (!in_range(op.qubits[1]))
            throw UsageError("qubit index " + std::to_string(op.qubits[1]) + " out of range for " +
                             std::to_string(n) + "-qubit state");
        if (op.qubits[0] == op.qubits[1]) throw UsageError("CNOT control and target must differ");
    }
    if (!is_unitary(op.kind))
        throw UsageError("apply_gate needs a unitary kind, got " + std::string(to_string(op.kind)));
}

}  // namespace detail

inline void apply_gate(PureState& psi, const GateOp& op) {
    detail::check_op(psi.num_qubits(), op);
    if (op.kind == GateKind::CNOT) {
        kernel::apply_cnot(psi.amplitudes(), op.control(), op.target());
    } else {
        kernel::apply_1q(psi.amplitudes(), op.target(), gates::matrix(op.kind));
    }
}

inline void apply_gate(DensityMatrix& rho, const GateOp& op) {
    const int n = rho.num_qubits();
    detail::check_op(n, op);
    if (op.kind == GateKind::CNOT) {
        kernel::apply_cnot(rho.entries(), n + op.control(), n + op.target());
        kernel::apply_cnot(rho.entries(), op.control(), op.target());
    } else {
        rho.conjugate(op.target(), gates::matrix(op.kind));
    }
}

/// a's qubits become the low-order indices, b's are appended above.
inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    const int na = a.num_qubits();
    if (na + b.num_qubits() > kMaxQubits)
        throw CapacityError("tensor product of " + std::to_string(na) + " and " + std::to_string(b.num_qubits()) +
                            " qubits exceeds cap of " + std::to_string(kMaxQubits));
    DensityMatrix out = DensityMatrix::zero(na + b.num_qubits());
    for (std::size_t rb = 0; rb < b.dim(); ++rb)
        for (std::size_t cb = 0; cb < b.dim(); ++cb) {
            const cplx vb = b(rb, cb);
            if (vb == cplx{}) continue;
            for (std::size_t ra = 0; ra < a.dim(); ++ra)
                for (std::size_t ca = 0; ca < a.dim(); ++ca) out((rb << na) | ra, (cb << na) | ca) = a(ra, ca) * vb;
        }
    return out;
}

/// Traces out every qubit not in keep; kept qubits are relabeled in ascending
/// original order.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
    if (keep.empty()) throw UsageError("partial_trace needs a nonempty keep set");
    const int n = rho.num_qubits();
    std::sort(keep.begin(), keep.end());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        rho.check_qubit(keep[i]);
        if (i > 0 && keep[i] == keep[i - 1]) throw UsageError("partial_trace keep set has duplicates");
    }
    std::vector<int> traced;
    for (int q = 0, k = 0; q < n; ++q) {
        if (k < static_cast<int>(keep.size()) && keep[k] == q) {
            ++k;
        } else {
            traced.push_back(q);
        }
    }
    auto deposit = [](std::size_t bits, const std::vector<int>& positions) {
        std::size_t out = 0;
        for (std::size_t i = 0; i < positions.size(); ++i)
            if (bits >> i & 1) out |= std::size_t{1} << positions[i];
        return out;
    };
    const int nk = static_cast<int>(keep.size());
    std::vector<std::size_t> keep_idx(std::size_t{1} << nk);
    for (std::size_t i = 0; i < keep_idx.size(); ++i) keep_idx[i] = deposit(i, keep);
    std::vector<std::size_t> traced_idx(std::size_t{1} << traced.size());
    for (std::size_t i = 0; i < traced_idx.size(); ++i) traced_idx[i] = deposit(i, traced);

    DensityMatrix out = DensityMatrix::zero(nk);
    for (std::size_t r = 0; r < keep_idx.size(); ++r)
        for (std::size_t c = 0; c < keep_idx.size(); ++c) {
            cplx s{};
            for (const std::size_t t : traced_idx) s += rho(keep_idx[r] | t, keep_idx[c] | t);
            out(r, c) = s;
        }
    return out;
}

struct MeasureBranch {
    int outcome;
    double weight;
    DensityMatrix post_state;  // unnormalized, trace == weight
};

/// Projective Z measurement; both branches are returned unnormalized.
inline std::array<MeasureBranch, 2> measure_z(const DensityMatrix& rho, int qubit) {
    rho.check_qubit(qubit);
    const std::size_t mask = std::size_t{1} << qubit;
    DensityMatrix zero_branch = rho;
    DensityMatrix one_branch = rho;
    const std::size_t d = rho.dim();
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            const bool r1 = r & mask;
            const bool c1 = c & mask;
            if (r1 || c1) zero_branch(r, c) = 0.0;
            if (!r1 || !c1) one_branch(r, c) = 0.0;
        }
    const double w0 = zero_branch.trace();
    const double w1 = one_branch.trace();
    return {MeasureBranch{0, w0, std::move(zero_branch)}, MeasureBranch{1, w1, std::move(one_branch)}};
}

/// <psi|rho|psi>, clamped to [0, 1].
inline double fidelity(const PureState& ideal, const DensityMatrix& actual) {
    if (ideal.num_qubits() != actual.num_qubits())
        throw UsageError("fidelity of states with different qubit counts");
    const std::size_t d = actual.dim();
    cplx s{};
    for (std::size_t r = 0; r < d; ++r) {
        if (ideal[r] == cplx{}) continue;
        cplx row{};
        for (std::size_t c = 0; c < d; ++c) row += actual(r, c) * ideal[c];
        s += std::conj(ideal[r]) * row;
    }
    return std::clamp(s.real(), 0.0, 1.0);
}

inline double fidelity(const PureState& ideal, const PureState& actual) {
    return std::clamp(std::norm(ideal.inner(actual)), 0.0, 1.0);
}

}  // namespace steanesim
