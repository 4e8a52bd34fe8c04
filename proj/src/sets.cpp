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

#include "nicd/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace nicd {

namespace {

constexpr int kMaxDpLength = 2000;  // cubic-cost guard for the ball DP

double checked_probability_count(std::uint64_t count, std::uint64_t size, const char* what) {
    if (count == 0) throw std::domain_error(std::string(what) + ": empty set");
    if (count >= size) throw std::domain_error(std::string(what) + ": full set");
    return static_cast<double>(count) / static_cast<double>(size);
}

}  // namespace

int hamming_radius(const HammingBallSet& ball) {
    const double mean = hamming_indicator_mean(ball) * ball.n;
    const double threshold = mean - ball.alpha * std::sqrt(static_cast<double>(ball.n));
    if (threshold < 0.0)
        throw std::domain_error("hamming_radius: negative radius threshold (empty set)");
    return static_cast<int>(std::floor(threshold));
}

double hamming_indicator_mean(const HammingBallSet& ball) {
    const double s = static_cast<double>(ball.s);
    return ball.count_zeros ? 1.0 / s : (s - 1.0) / s;
}

void validate_spec(const SetSpec& spec) {
    if (const auto* e = std::get_if<ExplicitSet>(&spec)) {
        const std::uint64_t size = domain_size(e->s, e->n);
        std::uint64_t prev = 0;
        bool first = true;
        for (std::uint64_t p : e->points) {
            if (p >= size) throw std::invalid_argument("ExplicitSet: point index out of range");
            if (!first && p <= prev)
                throw std::invalid_argument("ExplicitSet: points must be sorted and distinct");
            prev = p;
            first = false;
        }
    } else if (const auto* c = std::get_if<CylinderSet>(&spec)) {
        if (c->s < 2 || c->n < 1) throw std::invalid_argument("CylinderSet: bad dimensions");
        if (c->k < 0 || c->k > c->n)
            throw std::invalid_argument("CylinderSet: k must lie in [0, n]");
    } else if (const auto* b = std::get_if<HammingBallSet>(&spec)) {
        if (b->s < 2 || b->n < 1) throw std::invalid_argument("HammingBallSet: bad dimensions");
        hamming_radius(*b);  // rejects empty sets
    }
}

int spec_s(const SetSpec& spec) {
    return std::visit([](const auto& v) { return v.s; }, spec);
}

int spec_n(const SetSpec& spec) {
    return std::visit([](const auto& v) { return v.n; }, spec);
}

std::string spec_descriptor(const SetSpec& spec) {
    std::ostringstream out;
    if (const auto* e = std::get_if<ExplicitSet>(&spec)) {
        out << "explicit:s=" << e->s << ",n=" << e->n << ",size=" << e->points.size();
    } else if (const auto* c = std::get_if<CylinderSet>(&spec)) {
        out << "cylinder:s=" << c->s << ",n=" << c->n << ",k=" << c->k;
    } else if (const auto* b = std::get_if<HammingBallSet>(&spec)) {
        out << "ball:s=" << b->s << ",n=" << b->n << ",alpha=" << b->alpha;
        if (b->count_zeros) out << ",zeros=1";
    }
    return out.str();
}

double log_binomial_tail(int n, int radius, double q) {
    if (radius < 0) throw std::domain_error("log_binomial_tail: negative radius");
    if (radius > n) radius = n;
    const double log_q = std::log(q);
    const double log_1mq = std::log1p(-q);
    const double lg_n = std::lgamma(static_cast<double>(n) + 1.0);
    // Two-pass log-sum-exp over the tail terms.
    std::vector<double> terms(static_cast<std::size_t>(radius) + 1);
    double max_term = -std::numeric_limits<double>::infinity();
    for (int w = 0; w <= radius; ++w) {
        const double lt = lg_n - std::lgamma(static_cast<double>(w) + 1.0) -
                          std::lgamma(static_cast<double>(n - w) + 1.0) + w * log_q +
                          (n - w) * log_1mq;
        terms[static_cast<std::size_t>(w)] = lt;
        max_term = std::max(max_term, lt);
    }
    double sum = 0.0;
    for (double lt : terms) sum += std::exp(lt - max_term);
    return max_term + std::log(sum);
}

double log_set_probability(const SetSpec& spec) {
    validate_spec(spec);
    if (const auto* e = std::get_if<ExplicitSet>(&spec)) {
        const std::uint64_t size = domain_size(e->s, e->n);
        checked_probability_count(e->points.size(), size, "set_probability");
        return std::log(static_cast<double>(e->points.size())) -
               static_cast<double>(e->n) * std::log(static_cast<double>(e->s));
    }
    if (const auto* c = std::get_if<CylinderSet>(&spec)) {
        if (c->k == 0) throw std::domain_error("set_probability: full set");
        return -static_cast<double>(c->k) * std::log(static_cast<double>(c->s));
    }
    const auto& b = std::get<HammingBallSet>(spec);
    const int r = hamming_radius(b);
    if (r >= b.n) throw std::domain_error("set_probability: full set");
    return log_binomial_tail(b.n, r, hamming_indicator_mean(b));
}

double set_probability(const SetSpec& spec) { return std::exp(log_set_probability(spec)); }

double indicator_pair_box_probability(int n, int radius, double p_one, double p_both) {
    if (n < 1) throw std::invalid_argument("indicator_pair_box_probability: n must be >= 1");
    if (n > kMaxDpLength)
        throw std::invalid_argument("indicator_pair_box_probability: n exceeds the DP guard of " +
                                    std::to_string(kMaxDpLength));
    if (radius < 0) return 0.0;
    if (radius >= n) radius = n;
    const double q11 = p_both;
    const double q10 = p_one - p_both;
    const double q01 = q10;
    const double q00 = 1.0 - 2.0 * p_one + p_both;
    const int m = radius + 1;  // states 0..radius per axis; exits are absorbed away
    std::vector<double> dp(static_cast<std::size_t>(m) * m, 0.0);
    dp[0] = 1.0;
    for (int step = 0; step < n; ++step) {
        // In-place update in decreasing state order; (wx-1, wy-1) entries are
        // still pre-step values when (wx, wy) is written.
        for (int wx = m - 1; wx >= 0; --wx) {
            double* row = dp.data() + static_cast<std::size_t>(wx) * m;
            const double* prev = wx > 0 ? dp.data() + static_cast<std::size_t>(wx - 1) * m : nullptr;
            for (int wy = m - 1; wy >= 0; --wy) {
                double acc = q00 * row[wy];
                if (wy > 0) acc += q01 * row[wy - 1];
                if (prev) {
                    acc += q10 * prev[wy];
                    if (wy > 0) acc += q11 * prev[wy - 1];
                }
                row[wy] = acc;
            }
        }
    }
    double total = 0.0;
    for (double v : dp) total += v;
    return total;
}

namespace {

double explicit_joint(const ExplicitSet& e, const NoiseModel& model) {
    FunctionTable ind = make_table(e.s, e.n);
    for (std::uint64_t p : e.points) ind.values[p] = 1.0;
    return correlated_expectation(ind, ind, model);
}

double ball_joint(const HammingBallSet& b, const NoiseModel& model) {
    const int r = hamming_radius(b);
    if (r >= b.n) throw std::domain_error("joint_agreement: full set");
    const double kd = kernel_diagonal(model);
    double p_one, p_both;
    if (b.count_zeros) {
        p_one = 1.0 / static_cast<double>(b.s);
        p_both = kd;
    } else {
        p_one = (static_cast<double>(b.s) - 1.0) / static_cast<double>(b.s);
        p_both = 1.0 - 2.0 / static_cast<double>(b.s) + kd;
    }
    return indicator_pair_box_probability(b.n, r, p_one, p_both);
}

double cylinder_log_joint(const CylinderSet& c, const NoiseModel& model) {
    if (c.k == 0) throw std::domain_error("joint_agreement: full set");
    const double per_coord =
        std::log1p(-(1.0 - 1.0 / static_cast<double>(c.s)) * model.epsilon);
    return -static_cast<double>(c.k) * std::log(static_cast<double>(c.s)) +
           static_cast<double>(c.k) * per_coord;
}

}  // namespace

double log_joint_agreement(const SetSpec& spec, const NoiseModel& model) {
    validate_spec(spec);
    if (spec_s(spec) != model.s)
        throw std::invalid_argument("joint_agreement: alphabet mismatch with model");
    if (const auto* c = std::get_if<CylinderSet>(&spec)) return cylinder_log_joint(*c, model);
    if (const auto* b = std::get_if<HammingBallSet>(&spec)) return std::log(ball_joint(*b, model));
    return std::log(explicit_joint(std::get<ExplicitSet>(spec), model));
}

double joint_agreement(const SetSpec& spec, const NoiseModel& model) {
    validate_spec(spec);
    if (spec_s(spec) != model.s)
        throw std::invalid_argument("joint_agreement: alphabet mismatch with model");
    if (const auto* c = std::get_if<CylinderSet>(&spec)) return std::exp(cylinder_log_joint(*c, model));
    if (const auto* b = std::get_if<HammingBallSet>(&spec)) return ball_joint(*b, model);
    return explicit_joint(std::get<ExplicitSet>(spec), model);
}

double m_epsilon(const SetSpec& spec, const NoiseModel& model) {
    if (model.epsilon <= 0.0)
        throw std::domain_error("m_epsilon: degenerate at epsilon = 0 (conditional is 1)");
    const double log_p = log_set_probability(spec);  // rejects empty/full sets
    const double log_joint = log_joint_agreement(spec, model);
    return (log_joint - log_p) / log_p;
}

AgreementReport analyze_set(const SetSpec& spec, const NoiseModel& model) {
    AgreementReport rep;
    rep.log_set_probability = log_set_probability(spec);
    rep.log_joint = log_joint_agreement(spec, model);
    rep.set_probability = std::exp(rep.log_set_probability);
    rep.joint = std::exp(rep.log_joint);
    rep.conditional = std::exp(rep.log_joint - rep.log_set_probability);
    if (model.epsilon > 0.0)
        rep.m_value = (rep.log_joint - rep.log_set_probability) / rep.log_set_probability;
    if (std::holds_alternative<CylinderSet>(spec)) rep.method = Method::kClosedForm;
    else if (std::holds_alternative<HammingBallSet>(spec)) rep.method = Method::kDp;
    else rep.method = Method::kEnumeration;
    return rep;
}

std::string method_name(Method m) {
    switch (m) {
        case Method::kClosedForm: return "closed-form";
        case Method::kDp: return "dp";
        case Method::kEnumeration: return "enumeration";
    }
    return "unknown";
}

ExplicitSet explicit_points(const SetSpec& spec) {
    validate_spec(spec);
    if (const auto* e = std::get_if<ExplicitSet>(&spec)) return *e;
    ExplicitSet out;
    out.s = spec_s(spec);
    out.n = spec_n(spec);
    const std::uint64_t size = domain_size(out.s, out.n);
    if (const auto* c = std::get_if<CylinderSet>(&spec)) {
        // First k symbols zero <=> index below s^(n-k) in big-endian packing.
        std::uint64_t count = 1;
        for (int i = 0; i < c->n - c->k; ++i) count *= static_cast<std::uint64_t>(c->s);
        out.points.resize(count);
        for (std::uint64_t i = 0; i < count; ++i) out.points[i] = i;
        return out;
    }
    const auto& b = std::get<HammingBallSet>(spec);
    const int r = hamming_radius(b);
    for (std::uint64_t idx = 0; idx < size; ++idx) {
        std::uint64_t rest = idx;
        int count = 0;
        for (int i = 0; i < b.n; ++i) {
            const int sym = static_cast<int>(rest % static_cast<std::uint64_t>(b.s));
            rest /= static_cast<std::uint64_t>(b.s);
            if (b.count_zeros ? (sym == 0) : (sym != 0)) ++count;
        }
        if (count <= r) out.points.push_back(idx);
    }
    return out;
}

namespace {

std::map<std::int64_t, std::vector<std::uint64_t>> label_preimages(const LabelTable& t) {
    std::map<std::int64_t, std::vector<std::uint64_t>> groups;
    for (std::uint64_t i = 0; i < t.labels.size(); ++i) groups[t.labels[i]].push_back(i);
    return groups;
}

void check_label_domain(const LabelTable& f, const LabelTable& g, const NoiseModel& model) {
    if (f.s != g.s || f.n != g.n)
        throw std::invalid_argument("label tables: domain mismatch");
    if (f.s != model.s) throw std::invalid_argument("label tables: alphabet mismatch with model");
    const std::uint64_t size = domain_size(f.s, f.n);
    if (f.labels.size() != size || g.labels.size() != size)
        throw std::invalid_argument("label tables: size mismatch");
}

}  // namespace

double protocol_agreement(const LabelTable& f, const LabelTable& g, const NoiseModel& model) {
    check_label_domain(f, g, model);
    const auto fg = label_preimages(f);
    const auto gg = label_preimages(g);
    double total = 0.0;
    for (const auto& [label, f_points] : fg) {
        const auto it = gg.find(label);
        if (it == gg.end()) continue;
        FunctionTable find = make_table(f.s, f.n);
        for (std::uint64_t p : f_points) find.values[p] = 1.0;
        FunctionTable gind = make_table(f.s, f.n);
        for (std::uint64_t p : it->second) gind.values[p] = 1.0;
        total += correlated_expectation(find, gind, model);
    }
    return total;
}

PreimageExtraction best_preimage_set(const LabelTable& f, const LabelTable& g, int k,
                                     const NoiseModel& model) {
    check_label_domain(f, g, model);
    if (k < 0 || k > f.n) throw std::invalid_argument("best_preimage_set: k must lie in [0, n]");
    const std::uint64_t size = domain_size(f.s, f.n);
    std::uint64_t cap = 1;
    for (int i = 0; i < f.n - k; ++i) cap *= static_cast<std::uint64_t>(f.s);

    PreimageExtraction best;
    bool have_best = false;
    for (char source : {'f', 'g'}) {
        const LabelTable& t = (source == 'f') ? f : g;
        for (const auto& [label, points] : label_preimages(t)) {
            if (points.size() > cap) {
                std::ostringstream msg;
                msg << "best_preimage_set: min-entropy violation in " << source << " at label "
                    << label << " (preimage size " << points.size() << " > " << cap << ")";
                throw std::invalid_argument(msg.str());
            }
            FunctionTable ind = make_table(f.s, f.n);
            for (std::uint64_t p : points) ind.values[p] = 1.0;
            const double prob = static_cast<double>(points.size()) / static_cast<double>(size);
            const double joint = correlated_expectation(ind, ind, model);
            const double conditional = joint / prob;
            if (!have_best || conditional > best.conditional) {
                best.set = ExplicitSet{f.s, f.n, points};
                best.set_probability = prob;
                best.conditional = conditional;
                best.degenerate = points.size() == size;
                best.source = source;
                best.label = label;
                have_best = true;
            }
        }
    }
    if (!have_best) throw std::invalid_argument("best_preimage_set: empty label tables");
    return best;
}

}  // namespace nicd
