#include "core/model.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace lbex {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void syntax_error(int line, size_t column, const std::string& what) {
    std::ostringstream os;
    os << "line " << line << ", column " << (column + 1) << ": " << what;
    fail(ErrorKind::Syntax, os.str());
}

// `y[3]`, `u[0]`; `e[...]` is recognized and rejected explicitly.
Regressor parse_regressor(const std::string& token, int line, size_t column) {
    if (token.size() < 4 || token[1] != '[' || token.back() != ']') {
        syntax_error(line, column, "expected a regressor like y[0] or u[1], got '" + token + "'");
    }
    RegressorKind kind;
    switch (token[0]) {
        case 'y': kind = RegressorKind::Output; break;
        case 'u': kind = RegressorKind::Input; break;
        case 'e':
            syntax_error(line, column,
                         "noise regressor '" + token +
                             "' is not supported: simulation is deterministic (free-run)");
        default:
            syntax_error(line, column, "unknown regressor kind '" + std::string(1, token[0]) + "'");
    }
    const std::string body = token.substr(2, token.size() - 3);
    if (body.empty()) syntax_error(line, column, "empty lag in '" + token + "'");
    for (char c : body) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            syntax_error(line, column, "lag must be a non-negative integer in '" + token + "'");
        }
    }
    Regressor r;
    r.kind = kind;
    r.lag = std::stoi(body);
    return r;
}

AngleStep parse_angle_step(const std::string& text, int line, size_t column) {
    AngleStep step;
    if (text.rfind("pi/", 0) == 0) {
        const std::string div = text.substr(3);
        if (div.empty()) syntax_error(line, column, "expected pi/<int>");
        for (char c : div) {
            if (!std::isdigit(static_cast<unsigned char>(c))) {
                syntax_error(line, column, "expected pi/<int>, got '" + text + "'");
            }
        }
        step.pi_divisor = std::stoi(div);
        if (step.pi_divisor == 0) syntax_error(line, column, "pi/0 is not a step");
        return step;
    }
    try {
        step.literal = Decimal::parse(text);
    } catch (const Error& e) {
        syntax_error(line, column, e.what());
    }
    return step;
}

// `A=<dec> Ts=<expr>` after "cosine".
InputSignal parse_cosine_params(std::istringstream& in, int line) {
    std::string tok;
    Decimal amplitude;
    AngleStep step;
    bool have_a = false, have_ts = false;
    while (in >> tok) {
        if (tok.rfind("A=", 0) == 0) {
            amplitude = Decimal::parse(tok.substr(2));
            have_a = true;
        } else if (tok.rfind("Ts=", 0) == 0) {
            step = parse_angle_step(tok.substr(3), line, 0);
            have_ts = true;
        } else {
            syntax_error(line, 0, "unexpected token '" + tok + "' in cosine input");
        }
    }
    if (!have_a || !have_ts) {
        syntax_error(line, 0, "cosine input needs both A=<dec> and Ts=<expr>");
    }
    return InputSignal::cosine(amplitude, step);
}

}  // namespace

std::string regressor_name(const Regressor& r) {
    return (r.kind == RegressorKind::Output ? "y" : "u") + std::to_string(r.lag);
}

double AngleStep::value() const {
    if (pi_divisor > 0) return M_PI / static_cast<double>(pi_divisor);
    return literal.value;
}

std::string AngleStep::text() const {
    if (pi_divisor > 0) return "pi/" + std::to_string(pi_divisor);
    return literal.text;
}

InputSignal InputSignal::none() { return InputSignal{}; }

InputSignal InputSignal::cosine(Decimal amplitude, AngleStep step) {
    InputSignal s;
    s.kind = Kind::Cosine;
    s.amplitude = std::move(amplitude);
    s.step = std::move(step);
    return s;
}

InputSignal InputSignal::from_samples(std::vector<double> values) {
    InputSignal s;
    s.kind = Kind::Samples;
    s.samples = std::move(values);
    return s;
}

double input_value(const InputSignal& signal, long n) {
    if (n < 0) fail(ErrorKind::Range, "input index must be >= 0, got " + std::to_string(n));
    switch (signal.kind) {
        case InputSignal::Kind::None:
            fail(ErrorKind::Range, "input signal 'none' queried at n=" + std::to_string(n));
        case InputSignal::Kind::Cosine: {
            const double arg = static_cast<double>(n) * signal.step.value();
            return signal.amplitude.value * std::cos(arg);
        }
        case InputSignal::Kind::Samples:
            if (static_cast<size_t>(n) >= signal.samples.size()) {
                fail(ErrorKind::Range, "input sample index " + std::to_string(n) +
                                           " out of range (have " +
                                           std::to_string(signal.samples.size()) + ")");
            }
            return signal.samples[static_cast<size_t>(n)];
    }
    fail(ErrorKind::Internal, "unreachable input kind");
}

void recompute_maxima(PolynomialModel& model) {
    model.max_output_lag = -1;
    model.max_input_lag = -1;
    model.degree = 0;
    for (const Term& t : model.terms) {
        model.degree = std::max(model.degree, t.degree());
        for (const Regressor& r : t.regressors) {
            if (r.kind == RegressorKind::Output) {
                model.max_output_lag = std::max(model.max_output_lag, r.lag);
            } else {
                model.max_input_lag = std::max(model.max_input_lag, r.lag);
            }
        }
    }
}

PolynomialModel parse_model(const std::string& text) {
    PolynomialModel model;
    bool saw_name = false;
    bool saw_input = false;

    std::istringstream stream(text);
    std::string raw;
    int line = 0;
    while (std::getline(stream, raw)) {
        ++line;
        const size_t hash = raw.find('#');
        std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (content.empty()) continue;

        std::istringstream in(content);
        std::string head;
        in >> head;

        if (head == "name") {
            if (saw_name) syntax_error(line, 0, "duplicate model name");
            std::string rest;
            std::getline(in, rest);
            rest = trim(rest);
            if (rest.empty()) syntax_error(line, 4, "missing model name");
            model.name = rest;
            saw_name = true;
            continue;
        }
        if (head == "input") {
            if (saw_input) syntax_error(line, 0, "duplicate input declaration");
            std::string kind;
            in >> kind;
            if (kind == "none") {
                model.input = InputSignal::none();
            } else if (kind == "cosine") {
                model.input = parse_cosine_params(in, line);
            } else {
                syntax_error(line, 6, "model input must be 'none' or 'cosine', got '" + kind + "'");
            }
            saw_input = true;
            continue;
        }

        // Term line: <signed decimal> [* y[<lag>]]... [* u[<lag>]]...
        Term term;
        size_t pos = 0;
        std::vector<std::pair<std::string, size_t>> factors;  // token, column
        while (pos < content.size()) {
            size_t star = content.find('*', pos);
            std::string piece =
                content.substr(pos, star == std::string::npos ? std::string::npos : star - pos);
            size_t lead = piece.find_first_not_of(" \t");
            factors.emplace_back(trim(piece), pos + (lead == std::string::npos ? 0 : lead));
            if (star == std::string::npos) break;
            pos = star + 1;
        }
        if (factors.empty() || factors.front().first.empty()) {
            syntax_error(line, 0, "empty term");
        }
        try {
            term.coefficient = Decimal::parse(factors.front().first);
        } catch (const Error&) {
            syntax_error(line, factors.front().second,
                         "expected a term starting with a decimal coefficient, got '" +
                             factors.front().first + "'");
        }
        for (size_t i = 1; i < factors.size(); ++i) {
            if (factors[i].first.empty()) {
                syntax_error(line, factors[i].second, "empty factor after '*'");
            }
            term.regressors.push_back(parse_regressor(factors[i].first, line, factors[i].second));
        }
        model.terms.push_back(std::move(term));
    }

    if (!saw_name) fail(ErrorKind::Validation, "model file declares no 'name'");
    if (model.terms.empty()) fail(ErrorKind::Validation, "model '" + model.name + "' has no terms");
    recompute_maxima(model);
    return model;
}

PolynomialModel parse_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_model(buf.str());
    } catch (const Error& e) {
        throw Error(e.kind(), path + ": " + e.what());
    }
}

std::string serialize_model(const PolynomialModel& model) {
    std::ostringstream os;
    os << "name " << model.name << "\n";
    switch (model.input.kind) {
        case InputSignal::Kind::None:
            os << "input none\n";
            break;
        case InputSignal::Kind::Cosine:
            os << "input cosine A=" << model.input.amplitude.text
               << " Ts=" << model.input.step.text() << "\n";
            break;
        case InputSignal::Kind::Samples:
            // Sample signals come from experiment files, never model files.
            os << "input none\n";
            break;
    }
    for (const Term& t : model.terms) {
        os << t.coefficient.text;
        for (const Regressor& r : t.regressors) {
            os << " * " << (r.kind == RegressorKind::Output ? "y[" : "u[") << r.lag << "]";
        }
        os << "\n";
    }
    return os.str();
}

std::vector<std::string> validate(const PolynomialModel& model) {
    std::vector<std::string> diagnostics;
    if (model.name.empty()) diagnostics.push_back("model has no name");
    if (model.terms.empty()) diagnostics.push_back("model has no terms");

    PolynomialModel recomputed = model;
    recompute_maxima(recomputed);
    if (recomputed.max_output_lag != model.max_output_lag) {
        diagnostics.push_back("declared max output lag " + std::to_string(model.max_output_lag) +
                              " but terms give " + std::to_string(recomputed.max_output_lag));
    }
    if (recomputed.max_input_lag != model.max_input_lag) {
        diagnostics.push_back("declared max input lag " + std::to_string(model.max_input_lag) +
                              " but terms give " + std::to_string(recomputed.max_input_lag));
    }
    if (recomputed.degree != model.degree) {
        diagnostics.push_back("declared degree " + std::to_string(model.degree) +
                              " but terms give " + std::to_string(recomputed.degree));
    }
    for (size_t i = 0; i < model.terms.size(); ++i) {
        const Term& t = model.terms[i];
        double reparsed = 0.0;
        bool ok = true;
        try {
            reparsed = Decimal::parse(t.coefficient.text).value;
        } catch (const Error&) {
            ok = false;
        }
        if (!ok || !(reparsed == t.coefficient.value && std::signbit(reparsed) ==
                                                            std::signbit(t.coefficient.value))) {
            diagnostics.push_back("term " + std::to_string(i) + ": coefficient text '" +
                                  t.coefficient.text + "' does not round-trip to its stored double");
        }
    }
    return diagnostics;
}

}  // namespace lbex
