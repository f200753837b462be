#include "dqc/circuit.hpp"

#include "dqc/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace dqc {

double wrap_phase(double p) {
    double r = std::fmod(p, 2.0);
    if (r < 0) r += 2.0;
    if (r >= 2.0) r -= 2.0;
    return r;
}

bool phase_eq(double a, double b, double tol) {
    double d = wrap_phase(a - b);
    return d <= tol || 2.0 - d <= tol;
}

namespace {

struct KindInfo {
    GateKind kind;
    std::string_view name;
    bool two;
    bool phased;
};

constexpr KindInfo kKinds[] = {
    {GateKind::H, "H", false, false},     {GateKind::Rz, "Rz", false, true},
    {GateKind::CRz, "CRz", true, true},   {GateKind::X, "X", false, false},
    {GateKind::Z, "Z", false, false},     {GateKind::S, "S", false, false},
    {GateKind::Sdg, "Sdg", false, false}, {GateKind::T, "T", false, false},
    {GateKind::Tdg, "Tdg", false, false}, {GateKind::Rx, "Rx", false, true},
    {GateKind::CZ, "CZ", true, false},    {GateKind::CX, "CX", true, false},
};

const KindInfo& info(GateKind k) {
    for (const auto& i : kKinds)
        if (i.kind == k) return i;
    throw UnsupportedGate("unknown gate kind");
}

std::string lower(std::string_view s) {
    std::string r(s);
    for (auto& c : r) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return r;
}

} // namespace

std::string_view kind_name(GateKind k) { return info(k).name; }
bool is_two_qubit(GateKind k) { return info(k).two; }
bool has_phase(GateKind k) { return info(k).phased; }

GateKind kind_from_name(std::string_view name) {
    std::string n = lower(name);
    if (n == "cnot") n = "cx";
    for (const auto& i : kKinds)
        if (lower(i.name) == n) return i.kind;
    throw UnsupportedGate("gate kind '" + std::string(name) + "'");
}

bool Gate::operator==(const Gate& o) const {
    return kind == o.kind && q0 == o.q0 && q1 == o.q1 && phase == o.phase;
}

Circuit::Circuit(int qubits) : n_(qubits) {
    if (qubits < 0) throw InvalidParams("negative qubit count");
}

Circuit& Circuit::add(const Gate& g) {
    auto bad = [&](int q) { return q < 0 || q >= n_; };
    if (bad(g.q0)) throw InvalidParams("qubit index out of range");
    if (is_two_qubit(g.kind)) {
        if (bad(g.q1)) throw InvalidParams("qubit index out of range");
        if (g.q0 == g.q1) throw InvalidParams("two-qubit gate on a single qubit");
    } else if (g.q1 != -1) {
        throw InvalidParams("single-qubit gate with two operands");
    }
    if (!std::isfinite(g.phase)) throw InvalidParams("non-finite phase");
    gates_.push_back(g);
    return *this;
}

bool Circuit::is_rebased() const {
    return std::all_of(gates_.begin(), gates_.end(), [](const Gate& g) {
        return g.kind == GateKind::H || g.kind == GateKind::Rz || g.kind == GateKind::CRz;
    });
}

int Circuit::crz_count() const {
    return static_cast<int>(std::count_if(gates_.begin(), gates_.end(),
                                          [](const Gate& g) { return g.kind == GateKind::CRz; }));
}

Circuit rebase(const Circuit& c) {
    Circuit out(c.qubit_count());
    for (const Gate& g : c.gates()) {
        switch (g.kind) {
        case GateKind::H:
        case GateKind::Rz:
        case GateKind::CRz: out.add(g); break;
        case GateKind::Z: out.rz(g.q0, 1.0); break;
        case GateKind::S: out.rz(g.q0, 0.5); break;
        case GateKind::Sdg: out.rz(g.q0, -0.5); break;
        case GateKind::T: out.rz(g.q0, 0.25); break;
        case GateKind::Tdg: out.rz(g.q0, -0.25); break;
        case GateKind::X: out.h(g.q0).rz(g.q0, 1.0).h(g.q0); break;
        case GateKind::Rx: out.h(g.q0).rz(g.q0, g.phase).h(g.q0); break;
        case GateKind::CZ: out.crz(g.q0, g.q1, 1.0); break;
        case GateKind::CX: out.h(g.q1).crz(g.q0, g.q1, 1.0).h(g.q1); break;
        }
    }
    return out;
}

std::vector<int> qubit_timeline(const Circuit& c, int q) {
    if (q < 0 || q >= c.qubit_count()) throw InvalidParams("qubit index out of range");
    std::vector<int> t;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i].acts_on(q)) t.push_back(static_cast<int>(i));
    return t;
}

int IndexedCircuit::pos_on(int i, int q) const {
    const Gate& g = gate(i);
    return g.q0 == q ? tpos[static_cast<std::size_t>(i)][0] : tpos[static_cast<std::size_t>(i)][1];
}

std::shared_ptr<const IndexedCircuit> index_circuit(Circuit c) {
    if (!c.is_rebased()) throw NotRebased("circuit contains gates outside {H, Rz, CRz}");
    auto ic = std::make_shared<IndexedCircuit>();
    ic->circuit = std::move(c);
    const int n = ic->circuit.qubit_count();
    ic->timeline.assign(static_cast<std::size_t>(n), {});
    ic->tpos.assign(ic->circuit.size(), {-1, -1});
    for (std::size_t i = 0; i < ic->circuit.size(); ++i) {
        const Gate& g = ic->circuit[i];
        auto& t0 = ic->timeline[static_cast<std::size_t>(g.q0)];
        ic->tpos[i][0] = static_cast<int>(t0.size());
        t0.push_back(static_cast<int>(i));
        if (g.q1 >= 0) {
            auto& t1 = ic->timeline[static_cast<std::size_t>(g.q1)];
            ic->tpos[i][1] = static_cast<int>(t1.size());
            t1.push_back(static_cast<int>(i));
        }
    }
    return ic;
}

// ---------------------------------------------------------------- JSON

using nlohmann::json;

std::string circuit_to_json(const Circuit& c, int indent) {
    json j;
    j["qubits"] = c.qubit_count();
    json gs = json::array();
    for (const Gate& g : c.gates()) {
        json o;
        o["kind"] = std::string(kind_name(g.kind));
        if (is_two_qubit(g.kind)) {
            o["q0"] = g.q0;
            o["q1"] = g.q1;
        } else {
            o["q"] = g.q0;
        }
        if (has_phase(g.kind)) o["phase"] = g.phase;
        gs.push_back(std::move(o));
    }
    j["gates"] = std::move(gs);
    return j.dump(indent);
}

Circuit circuit_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
    try {
        Circuit c(j.at("qubits").get<int>());
        for (const auto& o : j.at("gates")) {
            Gate g;
            g.kind = kind_from_name(o.at("kind").get<std::string>());
            if (is_two_qubit(g.kind)) {
                g.q0 = o.at("q0").get<int>();
                g.q1 = o.at("q1").get<int>();
            } else {
                g.q0 = o.at("q").get<int>();
            }
            if (has_phase(g.kind)) g.phase = o.at("phase").get<double>();
            c.add(g);
        }
        return c;
    } catch (const json::exception& e) {
        throw ParseError(std::string("circuit JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------- QASM

namespace {

// Recursive-descent evaluator for gate arguments: numbers, pi, + - * / ().
class Expr {
public:
    explicit Expr(std::string s) : s_(std::move(s)) {}
    double eval() {
        double v = sum();
        skip();
        if (i_ != s_.size()) throw ParseError("bad expression '" + s_ + "'");
        return v;
    }

private:
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    double sum() {
        double v = product();
        for (;;) {
            if (eat('+')) v += product();
            else if (eat('-')) v -= product();
            else return v;
        }
    }
    double product() {
        double v = unary();
        for (;;) {
            if (eat('*')) v *= unary();
            else if (eat('/')) v /= unary();
            else return v;
        }
    }
    double unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return atom();
    }
    double atom() {
        skip();
        if (eat('(')) {
            double v = sum();
            if (!eat(')')) throw ParseError("missing ')'");
            return v;
        }
        if (s_.compare(i_, 2, "pi") == 0) {
            i_ += 2;
            return M_PI;
        }
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s_.substr(i_), &used);
        } catch (const std::exception&) {
            throw ParseError("bad number in '" + s_ + "'");
        }
        i_ += used;
        return v;
    }

    std::string s_;
    std::size_t i_ = 0;
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

Circuit circuit_from_qasm(const std::string& text) {
    // Strip // comments, then split on ';'.
    std::string src;
    {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            auto c = line.find("//");
            if (c != std::string::npos) line.resize(c);
            src += line;
            src += '\n';
        }
    }
    std::map<std::string, std::pair<int, int>> regs;   // name -> (offset, size)
    int total = 0;
    struct Pending {
        GateKind kind;
        std::vector<int> qs;
        double phase;
    };
    std::vector<Pending> ops;

    auto operand = [&](const std::string& tok) {
        auto lb = tok.find('['), rb = tok.find(']');
        if (lb == std::string::npos || rb == std::string::npos)
            throw ParseError("expected indexed register, got '" + tok + "'");
        auto name = trim(tok.substr(0, lb));
        auto it = regs.find(name);
        if (it == regs.end()) throw ParseError("unknown register '" + name + "'");
        int idx = std::stoi(tok.substr(lb + 1, rb - lb - 1));
        if (idx < 0 || idx >= it->second.second) throw ParseError("register index out of range");
        return it->second.first + idx;
    };

    std::istringstream stmts(src);
    std::string stmt;
    while (std::getline(stmts, stmt, ';')) {
        stmt = trim(stmt);
        if (stmt.empty()) continue;
        std::string head = stmt.substr(0, stmt.find_first_of(" \t\n("));
        std::string lhead = lower(head);
        if (lhead == "openqasm" || lhead == "include" || lhead == "creg" || lhead == "barrier")
            continue;
        if (lhead == "qreg") {
            auto rest = trim(stmt.substr(head.size()));
            auto lb = rest.find('['), rb = rest.find(']');
            if (lb == std::string::npos || rb == std::string::npos) throw ParseError("bad qreg");
            int size = std::stoi(rest.substr(lb + 1, rb - lb - 1));
            regs[trim(rest.substr(0, lb))] = {total, size};
            total += size;
            continue;
        }
        double phase = 0.0;
        std::string rest = stmt.substr(head.size());
        if (!rest.empty() && trim(rest).front() == '(') {
            auto open = rest.find('(');
            int depth = 0;
            std::size_t close = open;
            for (; close < rest.size(); ++close) {
                if (rest[close] == '(') ++depth;
                if (rest[close] == ')' && --depth == 0) break;
            }
            if (close >= rest.size()) throw ParseError("unbalanced parentheses");
            phase = Expr(rest.substr(open + 1, close - open - 1)).eval() / M_PI;
            rest = rest.substr(close + 1);
        }
        GateKind k = kind_from_name(lhead);
        Pending p{k, {}, phase};
        std::istringstream args(rest);
        std::string tok;
        while (std::getline(args, tok, ',')) p.qs.push_back(operand(trim(tok)));
        std::size_t want = is_two_qubit(k) ? 2 : 1;
        if (p.qs.size() != want) throw ParseError("wrong operand count for " + head);
        if (has_phase(k) && rest.size() == stmt.size() - head.size())
            throw ParseError(head + " requires an angle");
        ops.push_back(std::move(p));
    }
    Circuit c(total);
    for (const auto& p : ops)
        c.add({p.kind, p.qs[0], p.qs.size() > 1 ? p.qs[1] : -1, has_phase(p.kind) ? p.phase : 0.0});
    return c;
}

Circuit load_circuit(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    if (path.size() > 5 && path.substr(path.size() - 5) == ".qasm") return circuit_from_qasm(ss.str());
    return circuit_from_json(ss.str());
}

} // namespace dqc
