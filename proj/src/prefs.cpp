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

#include "d2dcache/prefs.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "d2dcache/rng.hpp"

namespace d2dcache {

PopularityVector zipf_popularity(std::size_t num_files, double beta) {
    if (num_files == 0)
        throw std::domain_error("zipf_popularity: need at least one file");
    if (!(beta >= 0.0))
        throw std::domain_error("zipf_popularity: beta must be non-negative");

    PopularityVector p(num_files);
    double norm = 0.0;
    for (std::size_t f = 0; f < num_files; ++f) {
        p[f] = std::pow(static_cast<double>(f + 1), -beta); // 1-based rank
        norm += p[f];
    }
    for (double& v : p) v /= norm;
    return p;
}

namespace {

double kernel(double x, double y, double exponent) {
    return std::pow(1.0 - std::abs(x - y), exponent);
}

} // namespace

PreferenceModel synth_preferences(std::vector<double> user_feature,
                                  std::vector<double> file_feature,
                                  double beta, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("synth_preferences: alpha must lie in (0, 1]");
    const std::size_t K = user_feature.size();
    const std::size_t F = file_feature.size();
    if (K == 0 || F == 0)
        throw std::domain_error("synth_preferences: need at least one user and one file");

    PreferenceModel model;
    model.num_users = K;
    model.num_files = F;
    model.alpha = alpha;
    model.beta = beta;
    model.p = zipf_popularity(F, beta);
    model.user_feature = std::move(user_feature);
    model.file_feature = std::move(file_feature);

    const double exponent = 1.0 / (alpha * alpha * alpha) - 1.0;

    // Joint mass: each file's popularity split over users by kernel weight.
    Matrix joint(K, F);
    for (std::size_t f = 0; f < F; ++f) {
        const double y = model.file_feature[f];
        double colsum = 0.0;
        for (std::size_t k = 0; k < K; ++k)
            colsum += kernel(model.user_feature[k], y, exponent);
        if (colsum > 0.0) {
            for (std::size_t k = 0; k < K; ++k)
                joint(k, f) = model.p[f] *
                              kernel(model.user_feature[k], y, exponent) / colsum;
        } else {
            // Every kernel value underflowed (tiny alpha): attribute the
            // file to the nearest user, the alpha -> 0 limit.
            std::size_t nearest = 0;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < K; ++k) {
                const double d = std::abs(model.user_feature[k] - y);
                if (d < best) {
                    best = d;
                    nearest = k;
                }
            }
            joint(nearest, f) = model.p[f];
        }
    }

    model.w.assign(K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        double row = 0.0;
        for (std::size_t f = 0; f < F; ++f) row += joint(k, f);
        model.w[k] = row;
        if (row == 0.0)
            throw std::runtime_error("synth_preferences: user with zero request mass");
    }

    model.Q = Matrix(K, F);
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t f = 0; f < F; ++f)
            model.Q(k, f) = joint(k, f) / model.w[k];
    return model;
}

PreferenceModel synth_preferences(std::size_t num_files, std::size_t num_users,
                                  double beta, double alpha, std::uint64_t seed) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::domain_error("synth_preferences: alpha must lie in (0, 1]");
    if (num_users == 0 || num_files == 0)
        throw std::domain_error("synth_preferences: need at least one user and one file");

    Rng rng(seed);
    std::vector<double> X(num_users);
    std::vector<double> Y(num_files);
    for (double& x : X) x = rng.uniform(); // all X_k first, user order
    for (double& y : Y) y = rng.uniform(); // then all Y_f, file order
    return synth_preferences(std::move(X), std::move(Y), beta, alpha);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("cosine_similarity: length mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0)
        throw std::domain_error("cosine_similarity: zero vector");
    return dot / std::sqrt(na * nb);
}

double average_similarity(const Matrix& Q) {
    const std::size_t K = Q.rows();
    if (K < 2)
        throw std::domain_error("average_similarity: need at least two users");

    std::vector<double> norm_sq(K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        double s = 0.0;
        for (double v : Q.row(k)) s += v * v;
        if (s == 0.0)
            throw std::domain_error("average_similarity: zero preference row");
        norm_sq[k] = s;
    }

    // Per-row partials over pairs (k, m > k), combined in row order so the
    // result does not depend on the thread count.
    std::vector<double> partial(K, 0.0);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(K); ++k) {
        const auto qk = Q.row(static_cast<std::size_t>(k));
        double acc = 0.0;
        for (std::size_t m = static_cast<std::size_t>(k) + 1; m < K; ++m) {
            const auto qm = Q.row(m);
            double dot = 0.0;
            for (std::size_t f = 0; f < qk.size(); ++f) dot += qk[f] * qm[f];
            acc += dot / std::sqrt(norm_sq[k] * norm_sq[m]);
        }
        partial[k] = acc;
    }

    double sum = 0.0;
    for (double v : partial) sum += v;
    return sum / (0.5 * static_cast<double>(K) * static_cast<double>(K - 1));
}

PopularityVector aggregate_popularity(const Matrix& Q, std::span<const double> w) {
    if (Q.rows() != w.size())
        throw std::invalid_argument("aggregate_popularity: shape mismatch");
    PopularityVector p(Q.cols(), 0.0);
    for (std::size_t k = 0; k < Q.rows(); ++k) {
        const double wk = w[k];
        const auto row = Q.row(k);
        for (std::size_t f = 0; f < p.size(); ++f) p[f] += wk * row[f];
    }
    return p;
}

} // namespace d2dcache
