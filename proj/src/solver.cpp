#include "analogc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace analogc {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

double softplus(double u) { return u > 30.0 ? u : std::log1p(std::exp(u)); }
double softplus_inv(double t) { return t > 30.0 ? t : std::log(std::expm1(std::max(t, 1e-300))); }
double sigmoid(double w) { return 1.0 / (1.0 + std::exp(-w)); }
double logit(double s) {
    s = std::clamp(s, 1e-9, 1.0 - 1e-9);
    return std::log(s / (1.0 - s));
}

enum class Transform { Identity, Softplus, Sigmoid };

constexpr double kAnchorWeight = 1e-3;

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

struct Component {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> reals;
    std::vector<std::size_t> binaries;
};

bool past(const std::optional<std::chrono::steady_clock::time_point>& deadline) {
    return deadline && std::chrono::steady_clock::now() > *deadline;
}

class Minimizer {
public:
    // anchor[v] > 0 adds the row kAnchorWeight * log(z[v] / anchor[v]). Time
    // rescaling against amplitudes is an exact symmetry of the equations; the
    // weak anchor picks t near tau out of that valley without moving e.
    Minimizer(const ResidualModel& model, const AAIS& aais, const SolverOptions& opts, std::vector<double> anchor)
        : model_(model), aais_(aais), opts_(opts), anchor_(std::move(anchor)) {}

    bool clamp_violated(const std::vector<double>& z, const std::vector<int>& column) const {
        for (auto [a, b] : aais_.separated_globals) {
            if (column[a] < 0 && column[b] < 0) continue;
            if (std::fabs(z[a] - z[b]) < aais_.min_separation) return true;
        }
        return false;
    }

    // Levenberg-Marquardt on 0.5*|r|^2 over the given variables; updates z in place.
    double run(std::vector<double>& z, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& vars,
               const std::vector<Transform>& transforms) const {
        const std::size_t m = rows.size(), n = vars.size();
        std::vector<int> column(model_.size(), -1);
        for (std::size_t c = 0; c < n; ++c) column[vars[c]] = static_cast<int>(c);

        Eigen::VectorXd theta(n);
        for (std::size_t c = 0; c < n; ++c) {
            double v = z[vars[c]];
            theta(c) = transforms[c] == Transform::Softplus ? softplus_inv(v) : transforms[c] == Transform::Sigmoid ? logit(v) : v;
        }
        auto apply = [&](const Eigen::VectorXd& th, std::vector<double>& out) {
            for (std::size_t c = 0; c < n; ++c) {
                double v = th(c);
                out[vars[c]] = transforms[c] == Transform::Softplus ? softplus(v) : transforms[c] == Transform::Sigmoid ? sigmoid(v) : v;
            }
        };
        auto chain = [&](const Eigen::VectorXd& th, Eigen::MatrixXd& jac) {
            for (std::size_t c = 0; c < n; ++c) {
                double d = 1.0;
                if (transforms[c] == Transform::Softplus) {
                    d = sigmoid(th(c));
                } else if (transforms[c] == Transform::Sigmoid) {
                    double s = sigmoid(th(c));
                    d = s * (1.0 - s);
                }
                jac.col(static_cast<Eigen::Index>(c)) *= d;
            }
        };

        std::vector<std::size_t> anchored;
        for (std::size_t c = 0; c < n; ++c)
            if (anchor_[vars[c]] > 0.0) anchored.push_back(c);
        const std::size_t rows_total = m + anchored.size();
        // Residuals (and Jacobian in z) of the equations followed by the anchor rows.
        auto eval = [&](const std::vector<double>& point, Eigen::VectorXd& out, Eigen::MatrixXd* jout) {
            Eigen::VectorXd base;
            Eigen::MatrixXd jbase;
            if (jout) jbase.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
            model_.evaluate(point, rows, base, jout ? &jbase : nullptr, column);
            out.resize(static_cast<Eigen::Index>(rows_total));
            out.head(static_cast<Eigen::Index>(m)) = base;
            if (jout) {
                jout->setZero(static_cast<Eigen::Index>(rows_total), static_cast<Eigen::Index>(n));
                jout->topRows(static_cast<Eigen::Index>(m)) = jbase;
            }
            for (std::size_t i = 0; i < anchored.size(); ++i) {
                std::size_t v = vars[anchored[i]];
                auto row = static_cast<Eigen::Index>(m + i);
                out(row) = kAnchorWeight * std::log(point[v] / anchor_[v]);
                if (jout) (*jout)(row, static_cast<Eigen::Index>(anchored[i])) = kAnchorWeight / point[v];
            }
        };

        apply(theta, z);
        Eigen::VectorXd r;
        Eigen::MatrixXd jac;
        try {
            eval(z, r, &jac);
        } catch (const EvalError&) {
            return std::numeric_limits<double>::infinity();
        }
        if (n == 0) return 0.5 * r.squaredNorm();
        chain(theta, jac);
        double cost = 0.5 * r.squaredNorm();
        Eigen::MatrixXd jtj = jac.transpose() * jac;
        Eigen::VectorXd grad = jac.transpose() * r;
        double lambda = 1e-3 * std::max(jtj.diagonal().maxCoeff(), 1e-12);
        double nu = 2.0;
        std::vector<double> trial = z;
        Eigen::VectorXd r_new;

        for (int it = 0; it < opts_.max_iterations; ++it) {
            if (cost < 1e-26 || grad.cwiseAbs().maxCoeff() < 1e-15) break;
            if ((it & 15) == 15 && past(opts_.deadline)) break;
            Eigen::MatrixXd a = jtj;
            Eigen::VectorXd scale = jtj.diagonal().cwiseMax(1e-12);
            a.diagonal() += lambda * scale;
            Eigen::VectorXd step = a.ldlt().solve(-grad);
            bool accepted = false;
            if (step.allFinite()) {
                Eigen::VectorXd theta_new = theta + step;
                apply(theta_new, trial);
                if (!clamp_violated(trial, column)) {
                    bool ok = true;
                    try {
                        eval(trial, r_new, nullptr);
                    } catch (const EvalError&) {
                        ok = false;
                    }
                    double cost_new = ok && r_new.allFinite() ? 0.5 * r_new.squaredNorm() : std::numeric_limits<double>::infinity();
                    double predicted = 0.5 * step.dot(lambda * scale.cwiseProduct(step) - grad);
                    double rho = predicted > 0 ? (cost - cost_new) / predicted : -1.0;
                    if (rho > 0 && cost_new < cost) {
                        bool tiny = cost - cost_new <= 1e-15 * cost && step.norm() <= 1e-12 * (theta.norm() + 1e-12);
                        theta = theta_new;
                        z = trial;
                        r = r_new;
                        cost = cost_new;
                        eval(z, r, &jac);
                        chain(theta, jac);
                        jtj = jac.transpose() * jac;
                        grad = jac.transpose() * r;
                        double f = 2.0 * rho - 1.0;
                        lambda *= std::max(1.0 / 3.0, 1.0 - f * f * f);
                        nu = 2.0;
                        accepted = true;
                        if (tiny) break;
                    }
                }
            }
            if (!accepted) {
                trial = z;
                lambda *= nu;
                nu *= 2.0;
                if (lambda > 1e30) break;
            }
        }
        return cost;
    }

private:
    const ResidualModel& model_;
    const AAIS& aais_;
    const SolverOptions& opts_;
    std::vector<double> anchor_;
};

}  // namespace

ResidualModel::ResidualModel(const EquationSystem& eqs) : eqs_(&eqs) {
    num_real_ = eqs.num_globals + eqs.num_segments();
    for (std::size_t j = 0; j < eqs.num_segments(); ++j)
        for (const auto& ins : eqs.aais->instructions) num_real_ += ins.num_locals();
    num_binary_ = eqs.num_segments() * eqs.num_instructions;
    for (const auto& e : eqs.equations) {
        Row row{eqs.time_var(e.segment), e.segment, e.rhs, {}};
        for (const auto& t : e.terms) {
            Term term{&t.coeff, {}, npos, t.instruction};
            std::set<VarRef> vars;
            t.coeff.collect_vars(vars);
            for (const auto& v : vars) {
                std::size_t idx = v.kind == VarKind::Global ? v.index : eqs.local_var(t.instruction, e.segment, v.index);
                term.partials.emplace_back(idx, t.coeff.diff(v));
            }
            if (t.instruction != EquationTerm::kSystem) term.binary = num_real_ + eqs.binary_var(t.instruction, e.segment);
            row.terms.push_back(std::move(term));
        }
        rows_.push_back(std::move(row));
    }
}

void ResidualModel::bind_env(const Term& term, const std::vector<double>& z, std::uint32_t segment, VarEnv& env) const {
    if (term.instruction == EquationTerm::kSystem) {
        env.globals.assign(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(eqs_->num_globals));
        return;
    }
    std::size_t n = eqs_->aais->instructions[term.instruction].num_locals();
    if (n == 0) {
        env.locals.clear();
        return;
    }
    auto first = z.begin() + static_cast<std::ptrdiff_t>(eqs_->local_var(term.instruction, segment, 0));
    env.locals.assign(first, first + static_cast<std::ptrdiff_t>(n));
}

double ResidualModel::coefficient(const Term& term, const std::vector<double>& z, std::uint32_t segment, VarEnv& env) const {
    bind_env(term, z, segment, env);
    return term.coeff->eval(env);
}

void ResidualModel::evaluate(const std::vector<double>& z, std::span<const std::size_t> equations, Eigen::VectorXd& r,
                             Eigen::MatrixXd* jac, std::span<const int> column) const {
    r.resize(static_cast<Eigen::Index>(equations.size()));
    if (jac) jac->setZero();
    VarEnv env;
    for (std::size_t i = 0; i < equations.size(); ++i) {
        const Row& row = rows_[equations[i]];
        double t = z[row.time];
        double sum = 0.0;
        for (const auto& term : row.terms) {
            double c = coefficient(term, z, row.segment, env);
            double shat = term.binary == npos ? 1.0 : z[term.binary];
            sum += c * shat;
            if (!jac) continue;
            for (const auto& [idx, deriv] : term.partials) {
                int col = column[idx];
                if (col >= 0) (*jac)(static_cast<Eigen::Index>(i), col) += t * shat * deriv.eval(env);
            }
            if (term.binary != npos && column[term.binary] >= 0) (*jac)(static_cast<Eigen::Index>(i), column[term.binary]) += t * c;
        }
        r(static_cast<Eigen::Index>(i)) = t * sum - row.rhs;
        if (jac && column[row.time] >= 0) (*jac)(static_cast<Eigen::Index>(i), column[row.time]) += sum;
    }
}

Eigen::VectorXd ResidualModel::residuals(const std::vector<double>& z) const {
    std::vector<std::size_t> all(rows_.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<int> column(size(), -1);
    Eigen::VectorXd r;
    evaluate(z, all, r, nullptr, column);
    return r;
}

Eigen::MatrixXd ResidualModel::jacobian(const std::vector<double>& z) const {
    std::vector<std::size_t> all(rows_.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<int> column(size());
    std::iota(column.begin(), column.end(), 0);
    Eigen::VectorXd r;
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(rows_.size()), static_cast<Eigen::Index>(size()));
    evaluate(z, all, r, &jac, column);
    return jac;
}

std::vector<double> ResidualModel::indicator_strength(const std::vector<double>& z) const {
    std::vector<double> out(num_binary_, 0.0);
    VarEnv env;
    for (const auto& row : rows_) {
        double t = z[row.time];
        for (const auto& term : row.terms) {
            if (term.binary == npos) continue;
            out[term.binary - num_real_] += std::fabs(t * coefficient(term, z, row.segment, env) * z[term.binary]);
        }
    }
    return out;
}

std::vector<bool> round_indicators(const ResidualModel& model, const std::vector<double>& z, double delta) {
    auto strength = model.indicator_strength(z);
    std::vector<bool> s(strength.size());
    for (std::size_t b = 0; b < s.size(); ++b) s[b] = strength[b] > delta;
    return s;
}

namespace {

std::vector<double> to_vector(const EquationSystem& eqs, const Solution& sol, std::size_t num_real) {
    std::vector<double> z(num_real + eqs.num_segments() * eqs.num_instructions, 0.0);
    for (std::size_t g = 0; g < eqs.num_globals; ++g) z[g] = sol.g.at(g);
    for (std::size_t j = 0; j < eqs.num_segments(); ++j) {
        z[eqs.time_var(j)] = sol.t.at(j);
        for (std::size_t k = 0; k < eqs.num_instructions; ++k) {
            std::size_t b = eqs.binary_var(k, j);
            const auto& locals = sol.a.at(b);
            for (std::size_t l = 0; l < locals.size(); ++l) z[eqs.local_var(k, j, l)] = locals[l];
            z[num_real + b] = sol.s.at(b) ? 1.0 : 0.0;
        }
    }
    return z;
}

Solution from_vector(const EquationSystem& eqs, const std::vector<double>& z, std::size_t num_real) {
    Solution sol;
    sol.g.assign(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(eqs.num_globals));
    for (std::size_t j = 0; j < eqs.num_segments(); ++j) sol.t.push_back(z[eqs.time_var(j)]);
    sol.a.resize(eqs.num_segments() * eqs.num_instructions);
    sol.s.resize(sol.a.size());
    for (std::size_t j = 0; j < eqs.num_segments(); ++j) {
        for (std::size_t k = 0; k < eqs.num_instructions; ++k) {
            std::size_t b = eqs.binary_var(k, j);
            std::size_t n = eqs.aais->instructions[k].num_locals();
            for (std::size_t l = 0; l < n; ++l) sol.a[b].push_back(z[eqs.local_var(k, j, l)]);
            sol.s[b] = z[num_real + b] > 0.5;
        }
    }
    return sol;
}

}  // namespace

std::vector<double> equation_residuals(const EquationSystem& eqs, const Solution& sol) {
    ResidualModel model(eqs);
    Eigen::VectorXd r = model.residuals(to_vector(eqs, sol, model.num_real()));
    return std::vector<double>(r.data(), r.data() + r.size());
}

double residual(const EquationSystem& eqs, const Solution& sol) {
    double e = 0.0;
    for (double r : equation_residuals(eqs, sol)) e += std::fabs(r);
    return e;
}

SolveResult solve(const EquationSystem& eqs, const SolverOptions& opts) {
    const AAIS& aais = *eqs.aais;
    ResidualModel model(eqs);
    const std::size_t nr = model.num_real();
    const auto& rows = model.rows();

    // Base point: globals at the seed, times at tau, locals zero, binaries off.
    std::vector<double> z(model.size(), 0.0);
    for (std::size_t g = 0; g < eqs.num_globals; ++g) z[g] = aais.global_seed.empty() ? 0.0 : aais.global_seed[g];
    for (std::size_t j = 0; j < eqs.num_segments(); ++j) z[eqs.time_var(j)] = eqs.durations[j];

    // Split into independent blocks of equations sharing variables.
    UnionFind uf(model.size());
    for (const auto& row : rows) {
        for (const auto& term : row.terms) {
            for (const auto& [idx, d] : term.partials) uf.unite(idx, row.time);
            if (term.binary != npos) uf.unite(term.binary, row.time);
        }
    }
    std::vector<Component> comps;
    std::vector<std::size_t> comp_of_root(model.size(), npos);
    std::vector<bool> active(model.size(), false);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::size_t root = uf.find(rows[i].time);
        if (comp_of_root[root] == npos) {
            comp_of_root[root] = comps.size();
            comps.emplace_back();
        }
        Component& c = comps[comp_of_root[root]];
        c.rows.push_back(i);
        auto mark = [&](std::size_t idx) {
            if (active[idx]) return;
            active[idx] = true;
            (idx >= nr ? c.binaries : c.reals).push_back(idx);
        };
        mark(rows[i].time);
        for (const auto& term : rows[i].terms) {
            for (const auto& [idx, d] : term.partials) mark(idx);
            if (term.binary != npos) mark(term.binary);
        }
    }
    for (auto& c : comps) {
        std::sort(c.reals.begin(), c.reals.end());
        std::sort(c.binaries.begin(), c.binaries.end());
    }

    SolveResult result;
    std::vector<double> anchor(model.size(), 0.0);
    for (std::size_t j = 0; j < eqs.num_segments(); ++j) anchor[eqs.time_var(j)] = eqs.durations[j];
    Minimizer lm(model, aais, opts, std::move(anchor));
    bool clamp_ok = true;
    bool timed_out = false;
    const double share = opts.epsilon / static_cast<double>(std::max<std::size_t>(comps.size(), 1));

    for (std::size_t ci = 0; ci < comps.size() && !timed_out; ++ci) {
        const Component& comp = comps[ci];
        // Rows without any term are constant; no restart can change them.
        bool constant = std::all_of(comp.rows.begin(), comp.rows.end(), [&](std::size_t r) { return rows[r].terms.empty(); });

        std::vector<Transform> relaxed_tf, fixed_tf;
        std::vector<std::size_t> relaxed_vars = comp.reals, fixed_vars = comp.reals;
        for (std::size_t idx : comp.reals) {
            Transform tf = idx >= eqs.num_globals && idx < eqs.num_globals + eqs.num_segments() ? Transform::Softplus : Transform::Identity;
            relaxed_tf.push_back(tf);
            fixed_tf.push_back(tf);
        }
        for (std::size_t idx : comp.binaries) {
            relaxed_vars.push_back(idx);
            relaxed_tf.push_back(Transform::Sigmoid);
        }

        std::vector<double> best_z;
        double best_e = std::numeric_limits<double>::infinity();
        bool best_clamp_ok = false;
        int attempts = constant ? 1 : std::max(opts.restarts, 1);
        for (int attempt = 0; attempt < attempts; ++attempt) {
            if (past(opts.deadline)) {
                timed_out = true;
                break;
            }
            std::seed_seq seq{static_cast<std::uint32_t>(opts.rng_seed), static_cast<std::uint32_t>(opts.rng_seed >> 32),
                              static_cast<std::uint32_t>(ci), static_cast<std::uint32_t>(attempt)};
            std::mt19937_64 rng(seq);
            std::normal_distribution<double> normal(0.0, 1.0);

            std::vector<double> trial = z;
            std::vector<double> seed = aais.global_seed;
            if (attempt > 0 && !seed.empty()) std::shuffle(seed.begin(), seed.end(), rng);
            for (std::size_t idx : comp.reals) {
                if (idx < eqs.num_globals) {
                    trial[idx] = seed.empty() ? 0.5 * normal(rng) : seed[idx] + (attempt > 0 ? 0.1 * normal(rng) : 0.0);
                } else if (idx < eqs.num_globals + eqs.num_segments()) {
                    double tau = eqs.durations[idx - eqs.num_globals];
                    trial[idx] = attempt > 0 ? tau * std::exp(0.3 * normal(rng)) : tau;
                } else {
                    trial[idx] = 0.5 * normal(rng);
                }
            }
            for (std::size_t idx : comp.binaries) trial[idx] = 0.5;

            lm.run(trial, comp.rows, relaxed_vars, relaxed_tf);
            auto strength = model.indicator_strength(trial);
            for (std::size_t idx : comp.binaries) trial[idx] = strength[idx - nr] > opts.delta ? 1.0 : 0.0;
            lm.run(trial, comp.rows, fixed_vars, fixed_tf);

            std::vector<int> no_cols(model.size(), -1);
            auto measure = [&](const std::vector<double>& point, Eigen::VectorXd& r) {
                try {
                    model.evaluate(point, comp.rows, r, nullptr, no_cols);
                    if (r.allFinite()) return r.cwiseAbs().sum();
                } catch (const EvalError&) {
                }
                return std::numeric_limits<double>::infinity();
            };
            Eigen::VectorXd r;
            double e = measure(trial, r);

            // The relaxation can stall with an indicator near 0 that rounding then
            // drops. Switch the indicators of unmet rows back on, re-solve, and
            // drop whichever stayed idle.
            if (std::isfinite(e) && e > 0.0) {
                std::vector<double> repaired = trial;
                bool changed = false;
                for (std::size_t i = 0; i < comp.rows.size(); ++i) {
                    double unmet = 1e-6 * std::max(1.0, std::fabs(rows[comp.rows[i]].rhs));
                    if (std::fabs(r(static_cast<Eigen::Index>(i))) <= unmet) continue;
                    for (const auto& term : rows[comp.rows[i]].terms) {
                        if (term.binary == npos || repaired[term.binary] != 0.0) continue;
                        repaired[term.binary] = 1.0;
                        for (const auto& [idx, d] : term.partials) repaired[idx] = 0.5 * normal(rng);
                        changed = true;
                    }
                }
                if (changed) {
                    lm.run(repaired, comp.rows, fixed_vars, fixed_tf);
                    auto st = model.indicator_strength(repaired);
                    for (std::size_t idx : comp.binaries)
                        if (repaired[idx] == 1.0 && st[idx - nr] <= opts.delta) repaired[idx] = 0.0;
                    lm.run(repaired, comp.rows, fixed_vars, fixed_tf);
                    Eigen::VectorXd r2;
                    double e2 = measure(repaired, r2);
                    if (e2 < e) {
                        trial = std::move(repaired);
                        e = e2;
                    }
                }
            }
            std::vector<int> cols(model.size(), -1);
            for (std::size_t idx : comp.reals) cols[idx] = 0;
            bool ok = !lm.clamp_violated(trial, cols);
            bool better = (ok && !best_clamp_ok) || (ok == best_clamp_ok && e < best_e);
            if (best_z.empty() || better) {
                best_z = trial;
                best_e = e;
                best_clamp_ok = ok;
            }
            if (ok && e < share) break;
        }
        if (best_z.empty()) break;
        for (std::size_t idx : comp.reals) z[idx] = best_z[idx];
        for (std::size_t idx : comp.binaries) z[idx] = best_z[idx];
        clamp_ok = clamp_ok && best_clamp_ok;
    }

    result.solution = from_vector(eqs, z, nr);
    result.solution.e = residual(eqs, result.solution);
    if (!std::isfinite(result.solution.e)) result.solution.e = std::numeric_limits<double>::infinity();
    if (timed_out) {
        result.status = SolveStatus::Timeout;
    } else if (clamp_ok && result.solution.e < opts.epsilon) {
        result.status = SolveStatus::Accepted;
    } else {
        result.status = SolveStatus::Infeasible;
    }
    return result;
}

InstructionSchedule to_instruction_schedule(const Solution& sol, const EquationSystem& eqs) {
    InstructionSchedule sched;
    sched.globals = sol.g;
    for (std::size_t j = 0; j < eqs.num_segments(); ++j) {
        ScheduleSegment seg;
        seg.duration = sol.t.at(j);
        for (std::size_t k = 0; k < eqs.num_instructions; ++k) {
            std::size_t b = eqs.binary_var(k, j);
            if (sol.s.at(b)) seg.executions.push_back({static_cast<InstructionId>(k), sol.a.at(b)});
        }
        sched.segments.push_back(std::move(seg));
    }
    return sched;
}

}  // namespace analogc
