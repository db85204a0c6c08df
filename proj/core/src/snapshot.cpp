#include "plab/snapshot.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace plab {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

json header_for(const Grid& g, const char* kind, std::initializer_list<const char*> cols) {
    json h;
    h["format"] = "plab-field";
    h["version"] = 1;
    h["nx"] = g.nx();
    h["ny"] = g.ny();
    h["h"] = g.h();
    h["origin"] = {g.origin().x, g.origin().y};
    h["field_kind"] = kind;
    h["shape"] = g.shape_tag();
    json c = json::array();
    c.push_back("i");
    c.push_back("j");
    c.push_back("kind");
    for (const char* col : cols) c.push_back(col);
    h["columns"] = std::move(c);
    return h;
}

template <typename T, typename WriteRow>
void write_impl(std::ostream& os, const NodeField<T>& f, const char* kind,
                std::initializer_list<const char*> cols, WriteRow&& write_row) {
    if (f.empty()) throw std::invalid_argument("write_snapshot: empty field");
    const Grid& g = f.grid();
    os << header_for(g, kind, cols).dump() << '\n';
    g.for_each_in_domain([&](int i, int j) {
        os << i << ',' << j << ',' << static_cast<int>(g.kind(i, j));
        write_row(os, f.at(i, j));
        os << '\n';
    });
}

struct ParsedHeader {
    json h;
    std::string kind;
};

ParsedHeader read_header(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("snapshot: missing header line");
    ParsedHeader p;
    p.h = json::parse(line);
    if (p.h.value("format", "") != "plab-field")
        throw std::runtime_error("snapshot: not a plab field snapshot");
    p.kind = p.h.at("field_kind").get<std::string>();
    return p;
}

struct RowData {
    int i, j, kind;
    double v[3];
    int nvals;
};

bool read_row(std::istream& is, int expected_vals, RowData& row) {
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        char comma;
        ss >> row.i >> comma >> row.j >> comma >> row.kind;
        row.nvals = 0;
        for (int k = 0; k < expected_vals; ++k) {
            if (!(ss >> comma >> row.v[k])) break;
            ++row.nvals;
        }
        if (row.nvals != expected_vals) throw std::runtime_error("snapshot: malformed row");
        return true;
    }
    return false;
}

template <typename T, typename Assign>
NodeField<T> read_impl(std::istream& is, const char* expect_kind, int nvals, Assign&& assign) {
    const ParsedHeader ph = read_header(is);
    if (ph.kind != expect_kind)
        throw std::runtime_error("snapshot: field_kind mismatch; expected " +
                                 std::string(expect_kind) + ", got " + ph.kind);
    const int nx = ph.h.at("nx").get<int>();
    const int ny = ph.h.at("ny").get<int>();
    const double h = ph.h.at("h").get<double>();
    const Vec2 origin{ph.h.at("origin").at(0).get<double>(), ph.h.at("origin").at(1).get<double>()};
    const std::string shape = ph.h.value("shape", "custom");

    std::vector<NodeKind> mask(static_cast<std::size_t>(nx + 1) * (ny + 1), NodeKind::exterior);
    std::vector<T> values(mask.size(), T{});
    RowData row;
    while (read_row(is, nvals, row)) {
        if (row.i < 0 || row.i > nx || row.j < 0 || row.j > ny)
            throw std::runtime_error("snapshot: node index out of range");
        const std::size_t idx = static_cast<std::size_t>(row.j) * (nx + 1) + row.i;
        mask[idx] = row.kind == 2 ? NodeKind::interior : NodeKind::boundary;
        assign(values[idx], row);
    }
    auto grid = std::make_shared<Grid>(nx, ny, h, origin, std::move(mask), shape);
    NodeField<T> f(grid);
    grid->for_each_in_domain([&](int i, int j) {
        f.at(i, j) = values[static_cast<std::size_t>(j) * (nx + 1) + i];
    });
    return f;
}

}  // namespace

void write_snapshot(std::ostream& os, const ScalarField& f) {
    write_impl(os, f, "scalar", {"v"},
               [](std::ostream& o, double v) { o << ',' << format_double(v); });
}

void write_snapshot(std::ostream& os, const VectorField& f) {
    write_impl(os, f, "vector", {"vx", "vy"}, [](std::ostream& o, const Vec2& v) {
        o << ',' << format_double(v.x) << ',' << format_double(v.y);
    });
}

void write_snapshot(std::ostream& os, const SymMatrixField& f) {
    write_impl(os, f, "sym_matrix", {"xx", "xy", "yy"}, [](std::ostream& o, const SymMat2& m) {
        o << ',' << format_double(m.xx) << ',' << format_double(m.xy) << ','
          << format_double(m.yy);
    });
}

std::string snapshot_field_kind(std::istream& is) { return read_header(is).kind; }

ScalarField read_scalar_snapshot(std::istream& is) {
    return read_impl<double>(is, "scalar", 1,
                             [](double& dst, const RowData& r) { dst = r.v[0]; });
}

VectorField read_vector_snapshot(std::istream& is) {
    return read_impl<Vec2>(is, "vector", 2,
                           [](Vec2& dst, const RowData& r) { dst = Vec2{r.v[0], r.v[1]}; });
}

SymMatrixField read_sym_matrix_snapshot(std::istream& is) {
    return read_impl<SymMat2>(is, "sym_matrix", 3, [](SymMat2& dst, const RowData& r) {
        dst = SymMat2{r.v[0], r.v[1], r.v[2]};
    });
}

namespace {

template <typename F>
void write_file_impl(const std::string& path, const F& f) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_snapshot_file: cannot open " + path);
    write_snapshot(os, f);
    if (!os) throw std::runtime_error("write_snapshot_file: write failed for " + path);
}

template <typename Reader>
auto read_file_impl(const std::string& path, Reader&& reader) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_snapshot_file: cannot open " + path);
    return reader(is);
}

}  // namespace

void write_snapshot_file(const std::string& path, const ScalarField& f) { write_file_impl(path, f); }
void write_snapshot_file(const std::string& path, const VectorField& f) { write_file_impl(path, f); }
void write_snapshot_file(const std::string& path, const SymMatrixField& f) { write_file_impl(path, f); }

ScalarField read_scalar_snapshot_file(const std::string& path) {
    return read_file_impl(path, [](std::istream& is) { return read_scalar_snapshot(is); });
}
VectorField read_vector_snapshot_file(const std::string& path) {
    return read_file_impl(path, [](std::istream& is) { return read_vector_snapshot(is); });
}
SymMatrixField read_sym_matrix_snapshot_file(const std::string& path) {
    return read_file_impl(path, [](std::istream& is) { return read_sym_matrix_snapshot(is); });
}

}  // namespace plab
