#pragma once

#include <iosfwd>
#include <string>

#include "cmskrylov/linalg.hpp"

namespace cmskrylov {

// Dense payload of a Matrix Market file (coordinate or array; real, integer,
// complex or pattern; general, symmetric, hermitian or skew-symmetric).
Mat parse_matrix_market(std::istream& in);
Mat read_matrix_market_dense(const std::string& path);

// Reads an operator and verifies self-adjointness in ip.
HermitianOperator read_matrix_market(const std::string& path, const InnerProduct& ip,
                                     const ToleranceProfile& tol = default_tolerances());
HermitianOperator read_matrix_market(const std::string& path);

}  // namespace cmskrylov
