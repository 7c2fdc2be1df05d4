// Copyright 2026 qecplan Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qecplan/matching.h"

#include <algorithm>
#include <random>

#include "gtest/gtest.h"
#include "qecplan/errors.h"
#include "test_util.h"

using namespace qecplan;
using qecplan::fixtures::bits_from_pattern;
using qecplan::fixtures::brute_force_min_weight;
using qecplan::fixtures::pattern_from_bits;
using qecplan::fixtures::syndrome_mask;

namespace {

Syndrome chain_syndrome(const RotatedSurfaceLayout &layout, const std::vector<std::size_t> &chain) {
    return syndrome_of(layout, ErrorPattern::from_indices(chain));
}

Syndrome random_syndrome(const RotatedSurfaceLayout &layout, std::mt19937_64 &rng, double p) {
    std::bernoulli_distribution flip(p);
    std::vector<std::size_t> q;
    for (std::size_t k = 0; k < layout.num_data_qubits(); ++k) {
        if (flip(rng)) {
            q.push_back(k);
        }
    }
    return syndrome_of(layout, ErrorPattern{q});
}

}  // namespace

TEST(matching_graph, metric_properties) {
    for (int d : {3, 5, 7}) {
        auto layout = build_layout(d);
        MatchingGraph graph(layout);
        const auto n = graph.num_nodes();
        ASSERT_EQ(graph.boundary_node(), layout.z_stabilizers().size());
        for (std::size_t a = 0; a < n; ++a) {
            EXPECT_EQ(graph.weight(a, a), 0);
            for (std::size_t b = 0; b < n; ++b) {
                EXPECT_EQ(graph.weight(a, b), graph.weight(b, a));
                if (a != b) {
                    EXPECT_GT(graph.weight(a, b), 0);
                    EXPECT_EQ(graph.chain(a, b).size(), static_cast<std::size_t>(graph.weight(a, b)));
                }
                for (std::size_t c = 0; c < n; ++c) {
                    EXPECT_LE(graph.weight(a, c), graph.weight(a, b) + graph.weight(b, c));
                }
            }
        }
    }
}

TEST(matching_graph, chains_have_endpoint_syndromes) {
    for (int d : {3, 5, 7, 9}) {
        auto layout = build_layout(d);
        MatchingGraph graph(layout);
        const auto boundary = graph.boundary_node();
        for (std::size_t a = 0; a < boundary; ++a) {
            for (std::size_t b = a + 1; b <= boundary; ++b) {
                std::vector<std::size_t> expected{a};
                if (b != boundary) {
                    expected.push_back(b);
                }
                ASSERT_EQ(chain_syndrome(layout, graph.chain(a, b)).defects, expected) << d << " " << a << " " << b;
            }
        }
    }
}

TEST(mwpm, empty_syndrome) {
    auto layout = build_layout(5);
    MatchingGraph graph(layout);
    MwpmDecoder decoder(graph);
    auto r = decoder.decode({});
    EXPECT_TRUE(r.pairs.empty());
    EXPECT_EQ(r.total_weight, 0);
    EXPECT_EQ(r.correction.weight(), 0u);
}

TEST(mwpm, single_boundary_defect) {
    auto layout = build_layout(3);
    MatchingGraph graph(layout);
    // A weight-2 Z check on the edge has a data qubit whose only Z check it is.
    for (std::size_t s = 0; s < layout.z_stabilizers().size(); ++s) {
        if (layout.z_stabilizers()[s].data.size() != 2) {
            continue;
        }
        auto r = MwpmDecoder(graph).decode(Syndrome{{s}});
        ASSERT_EQ(r.pairs.size(), 1u);
        EXPECT_EQ(r.pairs[0], std::make_pair(s, graph.boundary_node()));
        EXPECT_EQ(r.total_weight, 1);
        EXPECT_EQ(syndrome_of(layout, r.correction).defects, std::vector<std::size_t>{s});
    }
}

TEST(mwpm, adjacent_defects_pair_with_each_other) {
    auto layout = build_layout(5);
    MatchingGraph graph(layout);
    MwpmDecoder decoder(graph);
    // Centre qubit lies between two bulk Z checks.
    const std::size_t centre = 12;
    auto s = syndrome_of(layout, ErrorPattern{{centre}});
    ASSERT_EQ(s.defects.size(), 2u);
    auto r = decoder.decode(s);
    ASSERT_EQ(r.pairs.size(), 1u);
    EXPECT_EQ(r.pairs[0], std::make_pair(s.defects[0], s.defects[1]));
    EXPECT_EQ(r.correction.flipped, std::vector<std::size_t>{centre});
}

TEST(mwpm, rejects_bad_input) {
    auto layout = build_layout(13);
    MatchingGraph graph(layout);
    MwpmDecoder decoder(graph);
    Syndrome big;
    for (std::size_t s = 0; s <= kMaxDefects; ++s) {
        big.defects.push_back(s * 3);
    }
    try {
        decoder.decode(big);
        FAIL();
    } catch (const QecError &e) {
        EXPECT_EQ(e.code(), ErrorCode::TooManyDefects);
    }
    try {
        decoder.decode(Syndrome{{graph.boundary_node()}});
        FAIL();
    } catch (const QecError &e) {
        EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange);
    }
    big.defects.pop_back();
    EXPECT_NO_THROW(decoder.decode(big));
}

TEST(mwpm, d3_optimal_against_enumeration) {
    auto layout = build_layout(3);
    MatchingGraph graph(layout);
    MwpmDecoder decoder(graph);
    auto best = brute_force_min_weight(layout);
    EXPECT_EQ(best.size(), 16u);
    for (std::uint32_t bits = 0; bits < 512; ++bits) {
        auto s = syndrome_of(layout, pattern_from_bits(bits, 9));
        auto r = decoder.decode(s);
        auto target = syndrome_mask(layout, bits);
        ASSERT_EQ(syndrome_mask(layout, bits_from_pattern(r.correction)), target);
        ASSERT_EQ(r.total_weight, best.at(target));
        ASSERT_EQ(static_cast<int>(r.correction.weight()), best.at(target));
    }
}

TEST(mwpm, corrections_clear_random_syndromes) {
    std::mt19937_64 rng(2024);
    for (int d : {3, 5, 7, 9}) {
        auto layout = build_layout(d);
        MatchingGraph graph(layout);
        MwpmDecoder decoder(graph);
        int trials = d <= 5 ? 10000 : 2000;
        for (int t = 0; t < trials; ++t) {
            auto s = random_syndrome(layout, rng, 0.04);
            if (s.defects.size() > kMaxDefects) {
                continue;
            }
            auto r = decoder.decode(s);
            ASSERT_EQ(syndrome_of(layout, r.correction), s);
            ASSERT_LE(r.correction.weight(), static_cast<std::size_t>(r.total_weight));

            std::vector<char> flips(layout.num_data_qubits(), 0);
            decoder.decode_into(s.defects, flips);
            std::vector<std::size_t> q;
            for (std::size_t k = 0; k < flips.size(); ++k) {
                if (flips[k]) {
                    q.push_back(k);
                }
            }
            ASSERT_EQ(q, r.correction.flipped);
        }
    }
}

TEST(mwpm, deterministic_and_order_insensitive) {
    auto layout = build_layout(7);
    MatchingGraph graph(layout);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 500; ++t) {
        auto s = random_syndrome(layout, rng, 0.05);
        if (s.defects.size() > 12) {
            continue;
        }
        auto a = MwpmDecoder(graph).decode(s);
        Syndrome shuffled = s;
        std::shuffle(shuffled.defects.begin(), shuffled.defects.end(), rng);
        auto b = MwpmDecoder(graph).decode(shuffled);
        ASSERT_EQ(a.pairs, b.pairs);
        ASSERT_EQ(a.correction, b.correction);
        ASSERT_EQ(decode_mwpm(graph, s), a.correction);
    }
}

TEST(mwpm, corrects_all_low_weight_errors) {
    for (int d : {3, 5, 7}) {
        auto layout = build_layout(d);
        MatchingGraph graph(layout);
        MwpmDecoder decoder(graph);
        const auto n = layout.num_data_qubits();
        const std::size_t t = static_cast<std::size_t>(d - 1) / 2;
        auto check = [&](std::vector<std::size_t> q) {
            auto err = ErrorPattern::from_indices(q);
            auto corr = decoder.decode(syndrome_of(layout, err)).correction;
            auto residual = symmetric_difference(err, corr);
            ASSERT_FALSE(is_logical_flip(layout, residual)) << d;
        };
        for (std::size_t a = 0; a < n; ++a) {
            check({a});
            if (t >= 2) {
                for (std::size_t b = a + 1; b < n; ++b) {
                    check({a, b});
                    if (t >= 3) {
                        for (std::size_t c = b + 1; c < n; ++c) {
                            check({a, b, c});
                        }
                    }
                }
            }
        }
    }
}

TEST(mwpm, some_weight_d_error_fails) {
    auto layout = build_layout(5);
    MatchingGraph graph(layout);
    auto err = ErrorPattern{layout.logical_x_support()};
    auto residual = symmetric_difference(err, decode_mwpm(graph, syndrome_of(layout, err)));
    EXPECT_TRUE(is_logical_flip(layout, residual));
}
