#include "sparsedom/family_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace sparsedom {

namespace {

int log2_exact(int v) {
    int k = 0;
    while ((1 << k) < v) ++k;
    return (1 << k) == v ? k : -1;
}

std::string level_of(int side, int depth) {
    const int k = log2_exact(side);
    if (k < 0 || k > depth) return "-";
    return std::to_string(depth - k);
}

}  // namespace

FamilyParseError::FamilyParseError(int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

void write_family(std::ostream& out, const SparseFamily& family, int depth) {
    const int d = family.dim;
    out << "sparsedom-family 1\n";
    out << "dim " << d << "\n";
    out << "depth " << depth << "\n";
    out << "eta " << family.eta.str() << "\n";
    for (const auto& q : family.cubes) {
        out << "cube " << q.grid << ' ' << level_of(q.side, depth) << ' ' << q.corner[0];
        if (d == 2) out << ' ' << q.corner[1];
        out << ' ' << q.side << '\n';
    }
    for (std::size_t i = 0; i < family.certificate.size(); ++i) {
        for (const auto& s : family.certificate[i]) {
            out << "span " << i << ' ' << s.start[0];
            if (d == 2) out << ' ' << s.start[1];
            out << ' ' << s.length << '\n';
        }
    }
}

std::string format_family(const SparseFamily& family, int depth) {
    std::ostringstream os;
    write_family(os, family, depth);
    return os.str();
}

ParsedFamily read_family(std::istream& in) {
    ParsedFamily pf;
    SparseFamily& fam = pf.family;
    std::string line;
    int lineno = 0;
    bool header = false, have_dim = false, have_depth = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        auto need = [&](auto& v, const char* what) {
            if (!(ls >> v)) throw FamilyParseError(lineno, std::string("expected ") + what);
        };
        auto finish = [&] {
            std::string extra;
            if (ls >> extra) throw FamilyParseError(lineno, "trailing token '" + extra + "'");
        };
        if (!header) {
            int version = 0;
            if (key != "sparsedom-family") throw FamilyParseError(lineno, "missing 'sparsedom-family' header");
            need(version, "format version");
            if (version != 1) throw FamilyParseError(lineno, "unsupported format version");
            finish();
            header = true;
            continue;
        }
        if (key == "dim") {
            need(fam.dim, "dimension");
            if (fam.dim != 1 && fam.dim != 2) throw FamilyParseError(lineno, "dimension must be 1 or 2");
            have_dim = true;
            finish();
        } else if (key == "depth") {
            need(pf.depth, "depth");
            if (pf.depth < 0 || pf.depth > 30) throw FamilyParseError(lineno, "depth out of range");
            have_depth = true;
            finish();
        } else if (key == "eta") {
            std::string v;
            need(v, "density");
            try {
                fam.eta = Density::parse(v);
            } catch (const std::exception& e) {
                throw FamilyParseError(lineno, e.what());
            }
            finish();
        } else if (key == "cube") {
            if (!have_dim || !have_depth) throw FamilyParseError(lineno, "cube before dim/depth");
            Cube q;
            q.dim = fam.dim;
            std::string level;
            need(q.grid, "grid id");
            need(level, "level");
            need(q.corner[0], "corner");
            if (fam.dim == 2) need(q.corner[1], "corner");
            need(q.side, "side");
            if (q.side < 1) throw FamilyParseError(lineno, "side must be positive");
            if (level != level_of(q.side, pf.depth))
                throw FamilyParseError(lineno, "level '" + level + "' does not match side " + std::to_string(q.side));
            finish();
            fam.cubes.push_back(q);
            fam.certificate.emplace_back();
        } else if (key == "span") {
            long long idx = -1;
            Span s;
            need(idx, "cube index");
            need(s.start[0], "start");
            if (fam.dim == 2) need(s.start[1], "start");
            need(s.length, "length");
            if (idx < 0 || std::size_t(idx) >= fam.cubes.size())
                throw FamilyParseError(lineno, "span refers to unknown cube " + std::to_string(idx));
            if (s.length < 1) throw FamilyParseError(lineno, "span length must be positive");
            finish();
            fam.certificate[std::size_t(idx)].push_back(s);
            pf.has_certificate = true;
        } else {
            throw FamilyParseError(lineno, "unknown record '" + key + "'");
        }
    }
    if (!header) throw FamilyParseError(lineno, "empty family file");
    if (!have_dim) throw FamilyParseError(lineno, "missing dim");
    return pf;
}

ParsedFamily parse_family(const std::string& text) {
    std::istringstream is(text);
    return read_family(is);
}

void save_family(const std::string& path, const SparseFamily& family, int depth) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_family(out, family, depth);
}

ParsedFamily load_family(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return read_family(in);
}

}  // namespace sparsedom
