#include "npi/io.hpp"

#include <fstream>
#include <sstream>

namespace npi {

namespace {

Int parse_int(const std::string& s, int line) {
    try {
        return Int(s);
    } catch (const std::invalid_argument&) {
        throw std::runtime_error("parse error at line " + std::to_string(line) +
                                 ": bad integer '" + s + "'");
    }
}

}  // namespace

void write_polynomial(std::ostream& os, const FpPolynomial& f) {
    os << f.ctx().p() << '\n';
    for (const Int& c : f.coeffs()) os << c << '\n';
}

FpPolynomial read_polynomial(std::istream& is) {
    std::string line;
    int lineno = 0;
    std::vector<Int> vals;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        vals.push_back(parse_int(line, lineno));
    }
    if (vals.size() < 2) throw std::runtime_error("polynomial file: need p and a coefficient");
    PrimeContext ctx(vals[0]);
    return FpPolynomial(ctx, std::vector<Int>(vals.begin() + 1, vals.end()), 0);
}

void write_observations(std::ostream& os, const std::vector<NoisyObservation>& obs) {
    os << "t,u,delta\n";
    for (const auto& o : obs) os << o.t << ',' << o.u << ',' << o.delta << '\n';
}

std::vector<NoisyObservation> read_observations(std::istream& is, const PrimeContext& ctx) {
    std::string line;
    int lineno = 0;
    std::vector<NoisyObservation> out;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("t,u,delta", 0) == 0) continue;  // header
        std::istringstream ss(line);
        std::string ts, us, ds;
        if (!std::getline(ss, ts, ',') || !std::getline(ss, us, ',') || !std::getline(ss, ds)) {
            throw std::runtime_error("parse error at line " + std::to_string(lineno) +
                                     ": expected t,u,delta");
        }
        NoisyObservation o;
        o.t = parse_int(ts, lineno).get_si();
        o.u = parse_int(us, lineno);
        o.delta = parse_int(ds, lineno);
        if (o.u < 0 || o.u >= ctx.p()) {
            throw std::runtime_error("parse error at line " + std::to_string(lineno) +
                                     ": u outside [0, p)");
        }
        out.push_back(std::move(o));
    }
    return out;
}

void write_lattice(std::ostream& os, const IntegerLattice& lat) {
    os << "s " << lat.scale << '\n';
    for (const auto& row : lat.rows) {
        for (size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << row[j];
        os << '\n';
    }
}

IntegerLattice read_lattice(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.size() < 3 || line[0] != 's' || line[1] != ' ') {
        throw std::runtime_error("lattice file: missing 's scale' header");
    }
    IntegerLattice lat;
    lat.scale = parse_int(line.substr(2), 1);
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        IntVec row;
        std::string tok;
        while (ss >> tok) row.push_back(parse_int(tok, lineno));
        if (!lat.rows.empty() && row.size() != lat.rows[0].size()) {
            throw std::runtime_error("lattice file: ragged row at line " + std::to_string(lineno));
        }
        lat.rows.push_back(std::move(row));
    }
    return lat;
}

void save_file(const std::string& path, const std::string& contents) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << contents;
    if (!os) throw std::runtime_error("write failed: " + path);
}

std::string load_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace npi
