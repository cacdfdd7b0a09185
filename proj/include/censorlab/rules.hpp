#pragma once

namespace censorlab {

/// +1 discloses good news (observation above the mark-up threshold),
/// -1 discloses bad news (observation below it).
enum class Signature : int { Good = 1, Bad = -1 };

inline int sign_of(Signature s) { return static_cast<int>(s); }

/// Mark-up rule h(x, y) = eps * (x - (1 + a) y). Disclosure fires iff h >= 0.
class DecisionRule {
public:
    DecisionRule(Signature signature, double markup);

    static DecisionRule good(double markup) { return {Signature::Good, markup}; }
    static DecisionRule bad(double markup) { return {Signature::Bad, markup}; }

    Signature signature() const { return signature_; }
    double markup() const { return markup_; }
    double factor() const { return 1.0 + markup_; }

    DecisionRule with_markup(double markup) const { return {signature_, markup}; }

private:
    Signature signature_;
    double markup_;
};

double evaluate(const DecisionRule& rule, double x, double y);

/// Indifference counts as disclosure.
inline bool triggers(const DecisionRule& rule, double x, double y) { return evaluate(rule, x, y) >= 0.0; }

/// The unique x with evaluate(rule, x, y) == 0, i.e. (1 + a) y.
double indifference_value(const DecisionRule& rule, double y);

}  // namespace censorlab
