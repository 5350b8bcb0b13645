#ifndef ZHALL_EVALUATOR_HPP
#define ZHALL_EVALUATOR_HPP

#include <functional>
#include <string>
#include <vector>

#include "zhall/errors.hpp"

namespace zhall {

// A degree-n element of the shuffle algebra as a black-box evaluator
// C^n -> C. `symmetric` promises invariance under coordinate permutation;
// singular_set_hint is a human-readable description of excluded
// hyperplanes (empty for entire functions).
struct GradedEvaluator {
    int degree = 0;
    std::function<Complex(const std::vector<Complex>&)> eval;
    bool symmetric = false;
    std::string singular_set_hint;

    Complex operator()(const std::vector<Complex>& s) const {
        if (static_cast<int>(s.size()) != degree)
            throw ConfigError("GradedEvaluator: arity mismatch");
        return eval(s);
    }
    Complex operator()(Complex s1) const { return (*this)(std::vector<Complex>{s1}); }
    Complex operator()(Complex s1, Complex s2) const {
        return (*this)(std::vector<Complex>{s1, s2});
    }
    Complex operator()(Complex s1, Complex s2, Complex s3) const {
        return (*this)(std::vector<Complex>{s1, s2, s3});
    }

    static GradedEvaluator unit() {
        return GradedEvaluator{0, [](const std::vector<Complex>&) { return Complex(1.0); }, true, ""};
    }
    static GradedEvaluator entire1(std::function<Complex(Complex)> f) {
        return GradedEvaluator{1, [f = std::move(f)](const std::vector<Complex>& s) { return f(s[0]); },
                               true, ""};
    }
};

} // namespace zhall

#endif
