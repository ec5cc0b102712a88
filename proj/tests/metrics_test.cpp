#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mob/errors.hpp"
#include "mob/metrics.hpp"

using namespace mob;
using namespace mob::metrics;

TEST_CASE("mae hand values") {
    std::vector<double> a = {0.0, 0.0}, b = {1.0, -1.0};
    CHECK(mae(a, a) == 0.0);
    CHECK(mae(a, b) == 1.0);
    std::vector<double> c = {1.0, 2.0, 3.0}, d = {1.5, 2.0, 2.0};
    CHECK(mae(c, d) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("rmse hand values") {
    std::vector<double> a = {0.0, 0.0}, b = {1.0, -1.0};
    CHECK(rmse(a, a) == 0.0);
    CHECK(rmse(a, b) == doctest::Approx(1.0).epsilon(1e-14));
    std::vector<double> c = {0.0, 0.0, 0.0}, d = {3.0, 0.0, 0.0};
    CHECK(rmse(c, d) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("rmae uses the population standard deviation") {
    std::vector<double> ref = {0.0, 2.0}; // population sigma = 1
    std::vector<double> hat = {0.0, 3.0};
    CHECK(rmae(ref, ref) == 0.0);
    CHECK(rmae(ref, hat) == doctest::Approx(1.0).epsilon(1e-14));

    // scale invariance
    std::vector<double> ref2 = {0.0, 6.0}, hat2 = {0.0, 9.0};
    CHECK(rmae(ref2, hat2) == doctest::Approx(rmae(ref, hat)).epsilon(1e-14));

    std::vector<double> flat = {1.0, 1.0};
    CHECK_THROWS_AS(rmae(flat, hat), ZeroSpread);
}

TEST_CASE("r2 hand values") {
    std::vector<double> ref = {0.0, 1.0, 2.0};
    CHECK(r2(ref, ref) == doctest::Approx(1.0).epsilon(1e-14));
    std::vector<double> mean_only = {1.0, 1.0, 1.0};
    CHECK(r2(ref, mean_only) == doctest::Approx(0.0).epsilon(1e-14));
    std::vector<double> hat = {0.0, 1.0, 1.0};
    CHECK(r2(ref, hat) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("class accuracies") {
    std::vector<int> ref = {1, 1, 0, 0}, hat = {1, 0, 0, 0};
    const auto acc = class_accuracies(ref, hat);
    CHECK(acc.positive.value() == doctest::Approx(50.0));
    CHECK(acc.negative.value() == doctest::Approx(100.0));

    const auto perfect = class_accuracies(ref, ref);
    CHECK(perfect.positive.value() == 100.0);
    CHECK(perfect.negative.value() == 100.0);

    std::vector<int> all_stable_hat = {0, 0, 0, 0};
    const auto degenerate = class_accuracies(ref, all_stable_hat);
    CHECK(degenerate.positive.value() == 0.0);
    CHECK(degenerate.negative.value() == 100.0);

    // absent class leaves its component undefined
    std::vector<int> only_neg = {0, 0, 0, 0};
    const auto partial = class_accuracies(only_neg, all_stable_hat);
    CHECK(!partial.positive.has_value());
    CHECK(partial.negative.value() == 100.0);

    std::vector<int> shorter = {1, 0};
    CHECK_THROWS_AS(class_accuracies(ref, shorter), LengthMismatch);
}

TEST_CASE("class accuracies are permutation invariant") {
    std::vector<int> ref = {1, 0, 1, 0, 0, 1, 0};
    std::vector<int> hat = {1, 0, 0, 0, 1, 1, 0};
    const auto base = class_accuracies(ref, hat);
    std::vector<int> order = {3, 1, 0, 6, 5, 4, 2};
    std::vector<int> ref_p, hat_p;
    for (int i : order) {
        ref_p.push_back(ref[i]);
        hat_p.push_back(hat[i]);
    }
    const auto perm = class_accuracies(ref_p, hat_p);
    CHECK(base.positive.value() == perm.positive.value());
    CHECK(base.negative.value() == perm.negative.value());
}

TEST_CASE("mae never exceeds rmse") {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> gauss(0.0, 2.0);
    std::uniform_int_distribution<int> len(1, 40);
    for (int rep = 0; rep < 1000; ++rep) {
        const int m = len(rng);
        std::vector<double> a(m), b(m);
        for (int i = 0; i < m; ++i) {
            a[i] = gauss(rng);
            b[i] = gauss(rng);
        }
        CHECK(mae(a, b) <= rmse(a, b) + 1e-15);
    }
}

TEST_CASE("regression metrics vanish only on perfect prediction") {
    std::vector<double> ref = {0.5, 1.5, -2.0, 0.25};
    std::vector<double> off = ref;
    off[2] += 1e-6;
    CHECK(mae(ref, off) > 0.0);
    CHECK(rmse(ref, off) > 0.0);
    CHECK(rmae(ref, off) > 0.0);
    CHECK(r2(ref, off) < 1.0);
    CHECK(mae(ref, ref) == 0.0);
    CHECK(r2(ref, ref) == 1.0);
}
