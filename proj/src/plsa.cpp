/*
 * Copyright 2026 The d2dcache Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "d2dcache/plsa.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "d2dcache/rng.hpp"

namespace d2dcache {

std::uint64_t RequestLog::total() const {
    std::uint64_t sum = 0;
    for (std::uint64_t n : counts) sum += n;
    return sum;
}

void RequestLog::add(const RequestLog& increment) {
    if (increment.num_users != num_users || increment.num_files != num_files)
        throw std::invalid_argument("RequestLog::add: shape mismatch");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += increment.counts[i];
}

namespace plsa {

namespace {

constexpr double kFloor = 1e-300; // probability floor inside logs

// Nonzero cells of the request matrix, with row and column traversal orders.
struct Cells {
    std::vector<std::uint32_t> row_ptr;  // K+1
    std::vector<std::uint32_t> file;     // per cell
    std::vector<std::uint32_t> user;     // per cell
    std::vector<double> count;           // per cell
    std::vector<std::uint32_t> col_ptr;  // F+1
    std::vector<std::uint32_t> col_cell; // cell indices, column-major order
    double total = 0.0;
};

Cells build_cells(const RequestLog& requests) {
    const std::size_t K = requests.num_users;
    const std::size_t F = requests.num_files;
    Cells cells;
    cells.row_ptr.assign(K + 1, 0);
    for (std::size_t k = 0; k < K; ++k) {
        cells.row_ptr[k] = static_cast<std::uint32_t>(cells.file.size());
        for (std::size_t f = 0; f < F; ++f) {
            const std::uint64_t n = requests.at(k, f);
            if (n == 0) continue;
            cells.file.push_back(static_cast<std::uint32_t>(f));
            cells.user.push_back(static_cast<std::uint32_t>(k));
            cells.count.push_back(static_cast<double>(n));
            cells.total += static_cast<double>(n);
        }
    }
    cells.row_ptr[K] = static_cast<std::uint32_t>(cells.file.size());

    std::vector<std::uint32_t> col_count(F, 0);
    for (std::uint32_t f : cells.file) ++col_count[f];
    cells.col_ptr.assign(F + 1, 0);
    for (std::size_t f = 0; f < F; ++f) cells.col_ptr[f + 1] = cells.col_ptr[f] + col_count[f];
    cells.col_cell.resize(cells.file.size());
    std::vector<std::uint32_t> cursor(cells.col_ptr.begin(), cells.col_ptr.end() - 1);
    for (std::uint32_t c = 0; c < cells.file.size(); ++c)
        cells.col_cell[cursor[cells.file[c]]++] = c; // k ascending within a column
    return cells;
}

void validate_params(const Params& params) {
    if (params.num_topics == 0 || params.num_users == 0 || params.num_files == 0)
        throw std::invalid_argument("plsa: empty parameter set");
    if (params.Pz.size() != params.num_topics ||
        params.Puz.rows() != params.num_users || params.Puz.cols() != params.num_topics ||
        params.Pfz.rows() != params.num_files || params.Pfz.cols() != params.num_topics)
        throw std::invalid_argument("plsa: parameter shape mismatch");
}

struct Workspace {
    Matrix row_mass;          // K x Z
    Matrix col_mass;          // F x Z
    std::vector<double> post; // nnz x Z, cell-major
};

/*
 * Fused E+M sweep. Posteriors for the nonzero cells are materialized once,
 * then reduced per row and per column; partial sums are always combined in
 * user / file order, so results do not depend on the thread count.
 */
Params em_iteration_impl(const Cells& cells, const Params& params, Workspace& ws) {
    const std::size_t Z = params.num_topics;
    const std::size_t K = params.num_users;
    const std::size_t F = params.num_files;
    const std::size_t nnz = cells.file.size();

    ws.row_mass = Matrix(K, Z);
    ws.col_mass = Matrix(F, Z);
    ws.post.assign(nnz * Z, 0.0);

    std::uint64_t degenerate = 0;

#pragma omp parallel for schedule(static) reduction(+ : degenerate)
    for (std::int64_t ki = 0; ki < static_cast<std::int64_t>(K); ++ki) {
        const std::size_t k = static_cast<std::size_t>(ki);
        auto row_acc = ws.row_mass.row(k);
        for (std::uint32_t c = cells.row_ptr[k]; c < cells.row_ptr[k + 1]; ++c) {
            const std::size_t f = cells.file[c];
            const double n = cells.count[c];
            double* post = ws.post.data() + static_cast<std::size_t>(c) * Z;
            double mass = 0.0;
            for (std::size_t j = 0; j < Z; ++j) {
                post[j] = params.Pz[j] * params.Puz(k, j) * params.Pfz(f, j);
                mass += post[j];
            }
            if (mass > 0.0) {
                for (std::size_t j = 0; j < Z; ++j) post[j] /= mass;
            } else {
                ++degenerate;
                const double uniform = 1.0 / static_cast<double>(Z);
                for (std::size_t j = 0; j < Z; ++j) post[j] = uniform;
            }
            for (std::size_t j = 0; j < Z; ++j) row_acc[j] += n * post[j];
        }
    }

#pragma omp parallel for schedule(static)
    for (std::int64_t fi = 0; fi < static_cast<std::int64_t>(F); ++fi) {
        const std::size_t f = static_cast<std::size_t>(fi);
        auto col_acc = ws.col_mass.row(f);
        for (std::uint32_t i = cells.col_ptr[f]; i < cells.col_ptr[f + 1]; ++i) {
            const std::uint32_t c = cells.col_cell[i];
            const double n = cells.count[c];
            const double* post = ws.post.data() + static_cast<std::size_t>(c) * Z;
            for (std::size_t j = 0; j < Z; ++j) col_acc[j] += n * post[j];
        }
    }

    Params next;
    next.num_topics = Z;
    next.num_users = K;
    next.num_files = F;
    next.Pz.assign(Z, 0.0);
    next.Puz = Matrix(K, Z);
    next.Pfz = Matrix(F, Z);
    next.degenerate_fibers = degenerate;

    std::vector<double> topic_mass(Z, 0.0);
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t j = 0; j < Z; ++j) topic_mass[j] += ws.row_mass(k, j);

    for (std::size_t j = 0; j < Z; ++j) {
        next.Pz[j] = topic_mass[j] / cells.total;
        if (topic_mass[j] > 0.0) {
            for (std::size_t k = 0; k < K; ++k)
                next.Puz(k, j) = ws.row_mass(k, j) / topic_mass[j];
            for (std::size_t f = 0; f < F; ++f)
                next.Pfz(f, j) = ws.col_mass(f, j) / topic_mass[j];
        } else {
            // topic lost all responsibility; keep the columns valid simplexes
            ++next.dead_topics;
            for (std::size_t k = 0; k < K; ++k)
                next.Puz(k, j) = 1.0 / static_cast<double>(K);
            for (std::size_t f = 0; f < F; ++f)
                next.Pfz(f, j) = 1.0 / static_cast<double>(F);
        }
    }
    return next;
}

Params init_params(std::size_t Z, std::size_t K, std::size_t F, std::uint64_t seed) {
    Rng rng(seed);
    // Dirichlet(1) via normalized exponentials; draw order is Pz, then the
    // Puz columns, then the Pfz columns.
    auto draw_simplex = [&rng](std::span<double> out) {
        double sum = 0.0;
        for (double& v : out) {
            v = -std::log1p(-rng.uniform());
            sum += v;
        }
        for (double& v : out) v /= sum;
    };

    Params params;
    params.num_topics = Z;
    params.num_users = K;
    params.num_files = F;
    params.Pz.assign(Z, 0.0);
    params.Puz = Matrix(K, Z);
    params.Pfz = Matrix(F, Z);

    draw_simplex(params.Pz);
    std::vector<double> column;
    for (std::size_t j = 0; j < Z; ++j) {
        column.assign(K, 0.0);
        draw_simplex(column);
        for (std::size_t k = 0; k < K; ++k) params.Puz(k, j) = column[k];
    }
    for (std::size_t j = 0; j < Z; ++j) {
        column.assign(F, 0.0);
        draw_simplex(column);
        for (std::size_t f = 0; f < F; ++f) params.Pfz(f, j) = column[f];
    }
    return params;
}

} // namespace

double Params::joint(std::size_t k, std::size_t f) const {
    double mass = 0.0;
    for (std::size_t j = 0; j < num_topics; ++j)
        mass += Pz[j] * Puz(k, j) * Pfz(f, j);
    return mass;
}

double log_likelihood(const RequestLog& requests, const Params& params) {
    validate_params(params);
    if (requests.num_users != params.num_users || requests.num_files != params.num_files)
        throw std::invalid_argument("log_likelihood: shape mismatch");

    const std::size_t K = requests.num_users;
    const std::size_t F = requests.num_files;

    // Kahan-compensated partials per user, combined in user order.
    std::vector<double> partial(K, 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t ki = 0; ki < static_cast<std::int64_t>(K); ++ki) {
        const std::size_t k = static_cast<std::size_t>(ki);
        double sum = 0.0, comp = 0.0;
        for (std::size_t f = 0; f < F; ++f) {
            const std::uint64_t n = requests.at(k, f);
            if (n == 0) continue;
            const double term =
                static_cast<double>(n) * std::log(std::max(params.joint(k, f), kFloor));
            const double y = term - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        partial[k] = sum;
    }

    double sum = 0.0, comp = 0.0;
    for (double v : partial) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

std::vector<double> e_step(const Params& params) {
    validate_params(params);
    const std::size_t Z = params.num_topics;
    const std::size_t K = params.num_users;
    const std::size_t F = params.num_files;

    std::vector<double> posterior(Z * K * F, 0.0);
    std::size_t degenerate = 0;
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t f = 0; f < F; ++f) {
            double mass = 0.0;
            for (std::size_t j = 0; j < Z; ++j)
                mass += params.Pz[j] * params.Puz(k, j) * params.Pfz(f, j);
            if (mass > 0.0) {
                for (std::size_t j = 0; j < Z; ++j)
                    posterior[(j * K + k) * F + f] =
                        params.Pz[j] * params.Puz(k, j) * params.Pfz(f, j) / mass;
            } else {
                ++degenerate;
                for (std::size_t j = 0; j < Z; ++j)
                    posterior[(j * K + k) * F + f] = 1.0 / static_cast<double>(Z);
            }
        }
    if (degenerate > 0)
        std::fprintf(stderr,
                     "plsa: %zu posterior fibers had zero mass, fell back to uniform\n",
                     degenerate);
    return posterior;
}

Params m_step(const RequestLog& requests, const std::vector<double>& posterior,
              std::size_t num_topics) {
    const std::size_t Z = num_topics;
    const std::size_t K = requests.num_users;
    const std::size_t F = requests.num_files;
    if (posterior.size() != Z * K * F)
        throw std::invalid_argument("m_step: posterior shape mismatch");
    const double total = static_cast<double>(requests.total());
    if (total == 0.0)
        throw std::domain_error("m_step: empty request log");

    Params next;
    next.num_topics = Z;
    next.num_users = K;
    next.num_files = F;
    next.Pz.assign(Z, 0.0);
    next.Puz = Matrix(K, Z);
    next.Pfz = Matrix(F, Z);

    for (std::size_t j = 0; j < Z; ++j) {
        double topic_mass = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            double row = 0.0;
            for (std::size_t f = 0; f < F; ++f) {
                const std::uint64_t n = requests.at(k, f);
                if (n == 0) continue;
                row += static_cast<double>(n) * posterior[(j * K + k) * F + f];
            }
            next.Puz(k, j) = row;
            topic_mass += row;
        }
        for (std::size_t f = 0; f < F; ++f) {
            double col = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                const std::uint64_t n = requests.at(k, f);
                if (n == 0) continue;
                col += static_cast<double>(n) * posterior[(j * K + k) * F + f];
            }
            next.Pfz(f, j) = col;
        }

        next.Pz[j] = topic_mass / total;
        if (topic_mass > 0.0) {
            for (std::size_t k = 0; k < K; ++k) next.Puz(k, j) /= topic_mass;
            for (std::size_t f = 0; f < F; ++f) next.Pfz(f, j) /= topic_mass;
        } else {
            ++next.dead_topics;
            for (std::size_t k = 0; k < K; ++k)
                next.Puz(k, j) = 1.0 / static_cast<double>(K);
            for (std::size_t f = 0; f < F; ++f)
                next.Pfz(f, j) = 1.0 / static_cast<double>(F);
        }
    }
    if (next.dead_topics > 0)
        std::fprintf(stderr, "plsa: %zu topics lost all responsibility, reset to uniform\n",
                     next.dead_topics);
    return next;
}

Params em_iteration(const RequestLog& requests, const Params& params) {
    validate_params(params);
    if (requests.num_users != params.num_users || requests.num_files != params.num_files)
        throw std::invalid_argument("em_iteration: shape mismatch");
    if (requests.total() == 0)
        throw std::domain_error("em_iteration: empty request log");
    const Cells cells = build_cells(requests);
    Workspace ws;
    return em_iteration_impl(cells, params, ws);
}

Params fit(const RequestLog& requests, std::size_t num_topics,
           const FitOptions& options, std::uint64_t seed) {
    if (num_topics == 0)
        throw std::domain_error("fit: need at least one topic");
    if (!(options.epsilon > 0.0))
        throw std::domain_error("fit: epsilon must be positive");
    if (options.max_iter == 0 || options.restarts == 0)
        throw std::domain_error("fit: max_iter and restarts must be positive");
    const std::uint64_t total = requests.total();
    if (total == 0)
        throw std::domain_error("fit: empty request log");

    const Cells cells = build_cells(requests);
    Workspace ws;

    Params best;
    bool have_best = false;
    for (std::size_t r = 0; r < options.restarts; ++r) {
        const std::uint64_t restart_seed = (r == 0) ? seed : mix_seed(seed, r);
        Params params = init_params(num_topics, requests.num_users,
                                    requests.num_files, restart_seed);
        std::uint64_t degenerate = 0, dead = 0;
        std::vector<double> trace;
        double previous = 0.0;
        for (std::size_t i = 0; i < options.max_iter; ++i) {
            params = em_iteration_impl(cells, params, ws);
            degenerate += params.degenerate_fibers;
            dead += params.dead_topics;
            const double ll = log_likelihood(requests, params);
            trace.push_back(ll);
            const double delta = std::abs(ll - previous) / static_cast<double>(total);
            previous = ll;
            if (delta <= options.epsilon) break;
        }
        params.loglik_trace = std::move(trace);
        params.degenerate_fibers = degenerate;
        params.dead_topics = dead;
        if (!have_best || params.loglik_trace.back() > best.loglik_trace.back()) {
            best = std::move(params);
            have_best = true;
        }
    }

    if (best.degenerate_fibers > 0 || best.dead_topics > 0)
        std::fprintf(stderr,
                     "plsa: fit hit %llu zero-mass fibers and %llu dead topics\n",
                     static_cast<unsigned long long>(best.degenerate_fibers),
                     static_cast<unsigned long long>(best.dead_topics));
    return best;
}

PredictedStats predict(const Params& params) {
    validate_params(params);
    const std::size_t K = params.num_users;
    const std::size_t F = params.num_files;

    Matrix joint(K, F);
#pragma omp parallel for schedule(static)
    for (std::int64_t ki = 0; ki < static_cast<std::int64_t>(K); ++ki) {
        const std::size_t k = static_cast<std::size_t>(ki);
        for (std::size_t f = 0; f < F; ++f) joint(k, f) = params.joint(k, f);
    }

    PredictedStats stats;
    stats.w_hat.assign(K, 0.0);
    stats.p_hat.assign(F, 0.0);
    stats.Q_hat = Matrix(K, F);

    for (std::size_t k = 0; k < K; ++k) {
        double row = 0.0;
        const auto jrow = joint.row(k);
        for (std::size_t f = 0; f < F; ++f) {
            row += jrow[f];
            stats.p_hat[f] += jrow[f];
        }
        stats.w_hat[k] = row;
    }

    std::size_t silent_users = 0;
    for (std::size_t k = 0; k < K; ++k) {
        auto qrow = stats.Q_hat.row(k);
        if (stats.w_hat[k] > 0.0) {
            const auto jrow = joint.row(k);
            for (std::size_t f = 0; f < F; ++f) qrow[f] = jrow[f] / stats.w_hat[k];
        } else {
            ++silent_users;
            for (std::size_t f = 0; f < F; ++f) qrow[f] = stats.p_hat[f];
        }
    }
    if (silent_users > 0)
        std::fprintf(stderr, "plsa: %zu users had zero predicted mass, fell back to p_hat\n",
                     silent_users);
    return stats;
}

PredictedStats frequency_baseline(const RequestLog& requests) {
    const std::size_t K = requests.num_users;
    const std::size_t F = requests.num_files;
    const std::uint64_t grand = requests.total();
    if (grand == 0)
        throw std::domain_error("frequency_baseline: empty request log");

    std::vector<std::uint64_t> row_total(K, 0);
    std::vector<std::uint64_t> col_total(F, 0);
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t f = 0; f < F; ++f) {
            row_total[k] += requests.at(k, f);
            col_total[f] += requests.at(k, f);
        }

    PredictedStats stats;
    stats.w_hat.assign(K, 0.0);
    stats.p_hat.assign(F, 0.0);
    stats.Q_hat = Matrix(K, F);
    for (std::size_t f = 0; f < F; ++f)
        stats.p_hat[f] = static_cast<double>(col_total[f]) / static_cast<double>(grand);

    std::size_t silent_users = 0;
    for (std::size_t k = 0; k < K; ++k) {
        stats.w_hat[k] = static_cast<double>(row_total[k]) / static_cast<double>(grand);
        auto qrow = stats.Q_hat.row(k);
        if (row_total[k] > 0) {
            for (std::size_t f = 0; f < F; ++f)
                qrow[f] = static_cast<double>(requests.at(k, f)) /
                          static_cast<double>(row_total[k]);
        } else {
            ++silent_users;
            for (std::size_t f = 0; f < F; ++f) qrow[f] = stats.p_hat[f];
        }
    }
    if (silent_users > 0)
        std::fprintf(stderr,
                     "plsa: %zu users had no requests yet, fell back to p_hat rows\n",
                     silent_users);
    return stats;
}

} // namespace plsa
} // namespace d2dcache
