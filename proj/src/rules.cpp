#include "censorlab/rules.hpp"

#include <cmath>

#include "censorlab/errors.hpp"

namespace censorlab {

DecisionRule::DecisionRule(Signature signature, double markup) : signature_(signature), markup_(markup) {
    if (signature != Signature::Good && signature != Signature::Bad) {
        throw DomainError("DecisionRule: signature must be +1 or -1");
    }
    if (!std::isfinite(markup) || !(markup > -1.0)) {
        throw DomainError("DecisionRule: mark-up must be finite and > -1");
    }
}

double evaluate(const DecisionRule& rule, double x, double y) {
    return sign_of(rule.signature()) * (x - rule.factor() * y);
}

double indifference_value(const DecisionRule& rule, double y) { return rule.factor() * y; }

}  // namespace censorlab
