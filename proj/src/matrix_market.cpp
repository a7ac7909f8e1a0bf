#include "cmskrylov/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace cmskrylov {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '%') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

enum class Field { Real, Complex, Pattern };
enum class Symmetry { General, Symmetric, Hermitian, Skew };

}  // namespace

Mat parse_matrix_market(std::istream& in) {
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) throw ParseError(1, "empty input");
    ++lineno;
    std::istringstream hs(line);
    std::string banner, object, format, field_s, sym_s;
    hs >> banner >> object >> format >> field_s >> sym_s;
    if (banner != "%%MatrixMarket") throw ParseError(lineno, "missing %%MatrixMarket banner");
    object = lower(object);
    format = lower(format);
    field_s = lower(field_s);
    sym_s = lower(sym_s);
    if (object != "matrix") throw ParseError(lineno, "unsupported object '" + object + "'");
    const bool coordinate = format == "coordinate";
    if (!coordinate && format != "array") throw ParseError(lineno, "unsupported format '" + format + "'");
    Field field;
    if (field_s == "real" || field_s == "integer" || field_s == "double") field = Field::Real;
    else if (field_s == "complex") field = Field::Complex;
    else if (field_s == "pattern") field = Field::Pattern;
    else throw ParseError(lineno, "unsupported field '" + field_s + "'");
    if (field == Field::Pattern && !coordinate) throw ParseError(lineno, "pattern field requires coordinate format");
    Symmetry sym;
    if (sym_s == "general") sym = Symmetry::General;
    else if (sym_s == "symmetric") sym = Symmetry::Symmetric;
    else if (sym_s == "hermitian") sym = Symmetry::Hermitian;
    else if (sym_s == "skew-symmetric") sym = Symmetry::Skew;
    else throw ParseError(lineno, "unsupported symmetry '" + sym_s + "'");

    auto next_data_line = [&](std::string& out) {
        while (std::getline(in, out)) {
            ++lineno;
            if (!blank_or_comment(out)) return true;
        }
        return false;
    };

    if (!next_data_line(line)) throw ParseError(lineno, "missing size line");
    std::istringstream ss(line);
    long rows = 0, cols = 0, nnz = 0;
    if (!(ss >> rows >> cols)) throw ParseError(lineno, "malformed size line");
    if (coordinate && !(ss >> nnz)) throw ParseError(lineno, "malformed size line");
    if (rows <= 0 || cols <= 0 || nnz < 0) throw ParseError(lineno, "invalid dimensions");
    if (sym != Symmetry::General && rows != cols) throw ParseError(lineno, "symmetric storage requires a square matrix");

    Mat A = Mat::Zero(rows, cols);
    auto read_value = [&](std::istringstream& es) {
        if (field == Field::Pattern) return cplx(1.0, 0.0);
        double re = 0.0, im = 0.0;
        if (!(es >> re)) throw ParseError(lineno, "malformed value");
        if (field == Field::Complex && !(es >> im)) throw ParseError(lineno, "missing imaginary part");
        return cplx(re, im);
    };
    auto place = [&](long i, long j, cplx v) {
        A(i, j) += v;
        if (i == j) return;
        switch (sym) {
            case Symmetry::General: break;
            case Symmetry::Symmetric: A(j, i) += v; break;
            case Symmetry::Hermitian: A(j, i) += std::conj(v); break;
            case Symmetry::Skew: A(j, i) -= v; break;
        }
    };

    if (coordinate) {
        for (long k = 0; k < nnz; ++k) {
            if (!next_data_line(line)) throw ParseError(lineno, "unexpected end of file");
            std::istringstream es(line);
            long i = 0, j = 0;
            if (!(es >> i >> j)) throw ParseError(lineno, "malformed entry");
            if (i < 1 || i > rows || j < 1 || j > cols) throw ParseError(lineno, "index out of range");
            if (sym != Symmetry::General && j > i) throw ParseError(lineno, "entry above the diagonal in symmetric storage");
            place(i - 1, j - 1, read_value(es));
        }
    } else {
        for (long j = 0; j < cols; ++j) {
            const long start = (sym == Symmetry::General) ? 0 : (sym == Symmetry::Skew ? j + 1 : j);
            for (long i = start; i < rows; ++i) {
                if (!next_data_line(line)) throw ParseError(lineno, "unexpected end of file");
                std::istringstream es(line);
                place(i, j, read_value(es));
            }
        }
    }
    if (next_data_line(line)) throw ParseError(lineno, "trailing data");
    return A;
}

Mat read_matrix_market_dense(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return parse_matrix_market(in);
}

HermitianOperator read_matrix_market(const std::string& path, const InnerProduct& ip,
                                     const ToleranceProfile& tol) {
    return HermitianOperator::from_dense(read_matrix_market_dense(path), ip, tol);
}

HermitianOperator read_matrix_market(const std::string& path) {
    Mat A = read_matrix_market_dense(path);
    return HermitianOperator::from_dense(A, InnerProduct::identity(static_cast<int>(A.rows())));
}

}  // namespace cmskrylov
