// Copyright 2026 nicd Contributors
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

#include "nicd/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nicd {

NoiseModel make_noise_model(int s, double epsilon) {
    if (s < 2) throw std::invalid_argument("NoiseModel: alphabet size must be >= 2");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("NoiseModel: epsilon must lie in [0,1]");
    return NoiseModel{s, epsilon};
}

std::uint64_t domain_size(int s, int n) {
    if (s < 2) throw std::invalid_argument("domain_size: alphabet size must be >= 2");
    if (n < 1) throw std::invalid_argument("domain_size: length must be >= 1");
    std::uint64_t size = 1;
    for (int i = 0; i < n; ++i) {
        size *= static_cast<std::uint64_t>(s);
        if (size > kMaxTableEntries)
            throw std::invalid_argument("domain_size: s^n exceeds the dense-table guard of " +
                                        std::to_string(kMaxTableEntries));
    }
    return size;
}

std::uint64_t index_of(const SymbolString& x, int s) {
    std::uint64_t idx = 0;
    for (int v : x) {
        if (v < 0 || v >= s) throw std::invalid_argument("index_of: symbol out of range");
        idx = idx * static_cast<std::uint64_t>(s) + static_cast<std::uint64_t>(v);
    }
    return idx;
}

SymbolString string_at(std::uint64_t index, int s, int n) {
    SymbolString x(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        x[static_cast<std::size_t>(i)] = static_cast<int>(index % static_cast<std::uint64_t>(s));
        index /= static_cast<std::uint64_t>(s);
    }
    if (index != 0) throw std::invalid_argument("string_at: index out of range");
    return x;
}

double kernel_diagonal(const NoiseModel& model) {
    const double s = static_cast<double>(model.s);
    return (1.0 / s) * (1.0 - model.epsilon + model.epsilon / s);
}

double kernel_off_diagonal(const NoiseModel& model) {
    const double s = static_cast<double>(model.s);
    return (1.0 / s) * (model.epsilon / s);
}

CoordinateKernel coordinate_kernel(const NoiseModel& model) {
    if (model.s > 1024)
        throw std::invalid_argument("coordinate_kernel: dense kernel limited to s <= 1024");
    CoordinateKernel k;
    k.s = model.s;
    k.diagonal = kernel_diagonal(model);
    k.off_diagonal = kernel_off_diagonal(model);
    k.table.assign(static_cast<std::size_t>(model.s) * model.s, k.off_diagonal);
    for (int a = 0; a < model.s; ++a)
        k.table[static_cast<std::size_t>(a) * model.s + a] = k.diagonal;
    return k;
}

std::pair<SymbolString, SymbolString> sample_correlated_pair(const NoiseModel& model, int n,
                                                             Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_correlated_pair: length must be >= 1");
    SymbolString x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int xi = rng.below_int(model.s);
        x[static_cast<std::size_t>(i)] = xi;
        y[static_cast<std::size_t>(i)] =
            (rng.unit() < 1.0 - model.epsilon) ? xi : rng.below_int(model.s);
    }
    return {std::move(x), std::move(y)};
}

std::pair<SymbolString, SymbolString> sample_correlated_pair(const NoiseModel& model, int n,
                                                             std::uint64_t seed) {
    Rng rng(seed);
    return sample_correlated_pair(model, n, rng);
}

double joint_probability(const NoiseModel& model, const SymbolString& x, const SymbolString& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("joint_probability: length mismatch");
    const double kd = kernel_diagonal(model);
    const double ko = kernel_off_diagonal(model);
    double prob = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0 || x[i] >= model.s || y[i] < 0 || y[i] >= model.s)
            throw std::invalid_argument("joint_probability: symbol out of range");
        prob *= (x[i] == y[i]) ? kd : ko;
    }
    return prob;
}

double log_joint_probability(const NoiseModel& model, const SymbolString& x,
                             const SymbolString& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("log_joint_probability: length mismatch");
    const double log_kd = std::log(kernel_diagonal(model));
    const double log_ko = std::log(kernel_off_diagonal(model));
    double lp = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0 || x[i] >= model.s || y[i] < 0 || y[i] >= model.s)
            throw std::invalid_argument("log_joint_probability: symbol out of range");
        lp += (x[i] == y[i]) ? log_kd : log_ko;
    }
    return lp;
}

FunctionTable make_table(int s, int n) {
    FunctionTable f;
    f.s = s;
    f.n = n;
    f.values.assign(domain_size(s, n), 0.0);
    return f;
}

FunctionTable random_table(int s, int n, Rng& rng) {
    FunctionTable f = make_table(s, n);
    for (double& v : f.values) v = rng.unit();
    return f;
}

double table_mean(const FunctionTable& f) {
    double sum = 0.0;
    for (double v : f.values) sum += v;
    return sum / static_cast<double>(f.values.size());
}

double lp_norm(const FunctionTable& f, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    double sum = 0.0;
    for (double v : f.values) sum += std::pow(std::fabs(v), p);
    return std::pow(sum / static_cast<double>(f.values.size()), 1.0 / p);
}

void apply_axis_matrix(std::vector<double>& values, int s, int n, int axis,
                       const double* matrix) {
    std::uint64_t stride = 1;
    for (int i = n - 1; i > axis; --i) stride *= static_cast<std::uint64_t>(s);
    const std::uint64_t block = stride * static_cast<std::uint64_t>(s);
    std::vector<double> tmp(static_cast<std::size_t>(s));
    for (std::uint64_t base = 0; base < values.size(); base += block) {
        for (std::uint64_t off = 0; off < stride; ++off) {
            double* cell = values.data() + base + off;
            for (int a = 0; a < s; ++a) {
                const double* row = matrix + static_cast<std::size_t>(a) * s;
                double acc = 0.0;
                for (int b = 0; b < s; ++b) acc += row[b] * cell[static_cast<std::uint64_t>(b) * stride];
                tmp[static_cast<std::size_t>(a)] = acc;
            }
            for (int a = 0; a < s; ++a) cell[static_cast<std::uint64_t>(a) * stride] = tmp[static_cast<std::size_t>(a)];
        }
    }
}

FunctionTable apply_noise_operator(const FunctionTable& f, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0))
        throw std::domain_error("apply_noise_operator: tau must lie in [0,1]");
    if (f.values.size() != domain_size(f.s, f.n))
        throw std::invalid_argument("apply_noise_operator: table size mismatch");
    // One-coordinate operator as a matrix: tau on the diagonal plus (1-tau)/s.
    std::vector<double> op(static_cast<std::size_t>(f.s) * f.s,
                           (1.0 - tau) / static_cast<double>(f.s));
    for (int a = 0; a < f.s; ++a) op[static_cast<std::size_t>(a) * f.s + a] += tau;
    FunctionTable out = f;
    for (int axis = 0; axis < f.n; ++axis) apply_axis_matrix(out.values, f.s, f.n, axis, op.data());
    return out;
}

double correlated_expectation(const FunctionTable& f, const FunctionTable& g,
                              const NoiseModel& model) {
    if (f.s != g.s || f.n != g.n)
        throw std::invalid_argument("correlated_expectation: domain mismatch");
    if (f.s != model.s)
        throw std::invalid_argument("correlated_expectation: alphabet mismatch with model");
    const std::uint64_t size = domain_size(f.s, f.n);
    if (f.values.size() != size || g.values.size() != size)
        throw std::invalid_argument("correlated_expectation: table size mismatch");
    // Contract the joint kernel into g one axis at a time, then pair with f:
    //   sum_x f(x) * [ sum_y prod_i K(x_i, y_i) g(y) ].
    const double kd = kernel_diagonal(model);
    const double ko = kernel_off_diagonal(model);
    std::vector<double> kernel(static_cast<std::size_t>(f.s) * f.s, ko);
    for (int a = 0; a < f.s; ++a) kernel[static_cast<std::size_t>(a) * f.s + a] = kd;
    std::vector<double> h = g.values;
    for (int axis = 0; axis < f.n; ++axis) apply_axis_matrix(h, f.s, f.n, axis, kernel.data());
    double acc = 0.0;
    for (std::uint64_t i = 0; i < size; ++i) acc += f.values[i] * h[i];
    return acc;
}

}  // namespace nicd
