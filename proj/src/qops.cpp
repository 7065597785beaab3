#include "qpp/qops.hpp"

#include <algorithm>
#include <variant>

#include <fmt/format.h>

#include "qpp/errors.hpp"
#include "qpp/kernels.hpp"

namespace qpp {

namespace {

struct IdentityForm {};
struct HadamardForm {};
struct InversionForm {};
struct DenseForm {
    Matrix m;
};
struct OracleForm {
    std::vector<std::uint8_t> table;
};
struct ComposedForm {
    std::vector<Operator> steps;  // application order
};
struct TensorForm {
    std::vector<Operator> parts;  // {high, low}
};

using Form = std::variant<IdentityForm, DenseForm, HadamardForm, OracleForm, InversionForm, ComposedForm, TensorForm>;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

struct Operator::Impl {
    int n;
    Form form;
};

Operator Operator::identity(int n) {
    check_qubit_count(n);
    return Operator(std::make_shared<const Impl>(Impl{n, IdentityForm{}}));
}

Operator Operator::hadamard_all(int n) {
    check_qubit_count(n);
    return Operator(std::make_shared<const Impl>(Impl{n, HadamardForm{}}));
}

Operator Operator::phase_oracle(std::vector<std::uint8_t> table) {
    const int n = qubits_for_dimension(table.size());
    check_qubit_count(n);
    if (std::any_of(table.begin(), table.end(), [](std::uint8_t b) { return b > 1; })) {
        throw DomainError("oracle table entries must be 0 or 1");
    }
    return Operator(std::make_shared<const Impl>(Impl{n, OracleForm{std::move(table)}}));
}

Operator Operator::inversion_about_mean(int n) {
    check_qubit_count(n);
    return Operator(std::make_shared<const Impl>(Impl{n, InversionForm{}}));
}

Operator Operator::linear_map(Matrix m) {
    const int n = qubits_for_dimension(m.dim());
    if (n > kMaxDenseQubits) {
        throw CapacityError(fmt::format("dense operators are limited to {} qubits", kMaxDenseQubits));
    }
    return Operator(std::make_shared<const Impl>(Impl{n, DenseForm{std::move(m)}}));
}

Operator Operator::dense(Matrix m) {
    Operator op = linear_map(std::move(m));
    if (!is_unitary(op)) throw ValidationError("dense operator is not unitary");
    return op;
}

int Operator::n_qubits() const noexcept { return impl_->n; }

Operator::Kind Operator::kind() const noexcept {
    return std::visit(overloaded{
                          [](const IdentityForm&) { return Kind::Identity; },
                          [](const DenseForm&) { return Kind::Dense; },
                          [](const HadamardForm&) { return Kind::HadamardAll; },
                          [](const OracleForm&) { return Kind::PhaseOracle; },
                          [](const InversionForm&) { return Kind::InversionAboutMean; },
                          [](const ComposedForm&) { return Kind::Composed; },
                          [](const TensorForm&) { return Kind::TensorProd; },
                      },
                      impl_->form);
}

std::span<const Operator> Operator::operands() const noexcept {
    if (const auto* c = std::get_if<ComposedForm>(&impl_->form)) return c->steps;
    if (const auto* t = std::get_if<TensorForm>(&impl_->form)) return t->parts;
    return {};
}

std::span<const std::uint8_t> Operator::oracle_table() const noexcept {
    if (const auto* o = std::get_if<OracleForm>(&impl_->form)) return o->table;
    return {};
}

const Matrix* Operator::matrix() const noexcept {
    if (const auto* d = std::get_if<DenseForm>(&impl_->form)) return &d->m;
    return nullptr;
}

std::vector<Amplitude> Operator::apply_raw(std::span<const Amplitude> in) const {
    if (in.size() != dim()) {
        throw DomainError(fmt::format("operator on {} qubits applied to vector of length {}", n_qubits(), in.size()));
    }
    std::vector<Amplitude> out(in.begin(), in.end());
    std::visit(overloaded{
                   [](const IdentityForm&) {},
                   [&](const DenseForm& d) { kernels::omp::matvec(d.m, in, out); },
                   [&](const HadamardForm&) { kernels::omp::hadamard_all(out); },
                   [&](const OracleForm& o) { kernels::omp::phase_flip(out, o.table); },
                   [&](const InversionForm&) { kernels::omp::inversion_about_mean(out); },
                   [&](const ComposedForm& c) {
                       for (const auto& step : c.steps) out = step.apply_raw(out);
                   },
                   [&](const TensorForm& t) {
                       const Operator& high = t.parts[0];
                       const Operator& low = t.parts[1];
                       const std::size_t low_dim = low.dim();
                       const std::size_t high_dim = high.dim();
                       for (std::size_t a = 0; a < high_dim; ++a) {
                           std::span<Amplitude> block(out.data() + a * low_dim, low_dim);
                           const auto mapped = low.apply_raw(block);
                           std::copy(mapped.begin(), mapped.end(), block.begin());
                       }
                       std::vector<Amplitude> column(high_dim);
                       for (std::size_t b = 0; b < low_dim; ++b) {
                           for (std::size_t a = 0; a < high_dim; ++a) column[a] = out[a * low_dim + b];
                           const auto mapped = high.apply_raw(column);
                           for (std::size_t a = 0; a < high_dim; ++a) out[a * low_dim + b] = mapped[a];
                       }
                   },
               },
               impl_->form);
    return out;
}

Matrix Operator::to_dense() const {
    if (n_qubits() > kMaxDenseQubits) {
        throw CapacityError(fmt::format("dense materialization is limited to {} qubits", kMaxDenseQubits));
    }
    if (const auto* d = matrix()) return *d;
    const std::size_t n = dim();
    Matrix m(n);
    std::vector<Amplitude> ket(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::fill(ket.begin(), ket.end(), Amplitude{});
        ket[c] = 1.0;
        const auto col = apply_raw(ket);
        for (std::size_t r = 0; r < n; ++r) m(r, c) = col[r];
    }
    return m;
}

QuantumState apply(const Operator& u, const QuantumState& psi) {
    if (u.n_qubits() != psi.n_qubits()) {
        throw DomainError(fmt::format("{}-qubit operator applied to {}-qubit state", u.n_qubits(), psi.n_qubits()));
    }
    return QuantumState::from_amplitudes(u.apply_raw(psi.amplitudes()));
}

Operator adjoint(const Operator& u) {
    return std::visit(overloaded{
                          [&](const DenseForm& d) { return Operator::linear_map(d.m.adjoint()); },
                          [&](const ComposedForm& c) {
                              std::vector<Operator> steps;
                              steps.reserve(c.steps.size());
                              for (auto it = c.steps.rbegin(); it != c.steps.rend(); ++it) steps.push_back(adjoint(*it));
                              return Operator(std::make_shared<const Operator::Impl>(
                                  Operator::Impl{u.n_qubits(), ComposedForm{std::move(steps)}}));
                          },
                          [&](const TensorForm& t) { return tensor_op(adjoint(t.parts[0]), adjoint(t.parts[1])); },
                          // I, H, U_f and M are self-adjoint.
                          [&](const auto&) { return u; },
                      },
                      u.impl_->form);
}

Operator compose(const Operator& u, const Operator& v) {
    if (u.n_qubits() != v.n_qubits()) {
        throw DomainError(fmt::format("composing {}- and {}-qubit operators", u.n_qubits(), v.n_qubits()));
    }
    std::vector<Operator> steps;
    auto append = [&](const Operator& op) {
        if (op.kind() == Operator::Kind::Composed) {
            for (const auto& s : op.operands()) steps.push_back(s);
        } else {
            steps.push_back(op);
        }
    };
    append(v);
    append(u);
    return Operator(std::make_shared<const Operator::Impl>(Operator::Impl{u.n_qubits(), ComposedForm{std::move(steps)}}));
}

Operator tensor_op(const Operator& u, const Operator& v) {
    const int total = u.n_qubits() + v.n_qubits();
    if (total > kMaxQubits) {
        throw CapacityError(fmt::format("tensor product needs {} qubits (max {})", total, kMaxQubits));
    }
    return Operator(std::make_shared<const Operator::Impl>(Operator::Impl{total, TensorForm{{u, v}}}));
}

bool is_unitary(const Operator& u, double tol) {
    if (u.n_qubits() > kMaxDenseQubits) {
        throw CapacityError(fmt::format("unitarity check is limited to {} qubits", kMaxDenseQubits));
    }
    const Matrix m = u.to_dense();
    return max_abs_difference(m.adjoint() * m, Matrix::identity(m.dim())) <= tol;
}

}  // namespace qpp
