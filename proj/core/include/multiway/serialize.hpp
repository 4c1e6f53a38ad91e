#pragma once

// JSON model files. Matrices are stored as {rows, cols, data} with data in
// column-major order; dense tensors as {shape, data} in canonical order.
// Parsers throw io::FormatError on malformed or inconsistent documents.

#include "multiway/btd.hpp"
#include "multiway/cpd.hpp"
#include "multiway/kron_cs.hpp"
#include "multiway/tt.hpp"
#include "multiway/tucker.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace multiway {

std::string to_json(const CPModel& model);
std::string to_json(const TuckerModel& model);
std::string to_json(const std::vector<Ll1Term>& terms);
std::string to_json(const TTModel& model);
std::string to_json(const SparseCore& core);

/// Value of the top-level "kind" field: cpd, tucker, btd_ll1, tt or sparse_core.
std::string model_kind(std::string_view json);

CPModel cp_model_from_json(std::string_view json);
TuckerModel tucker_model_from_json(std::string_view json);
std::vector<Ll1Term> btd_terms_from_json(std::string_view json);
TTModel tt_model_from_json(std::string_view json);
SparseCore sparse_core_from_json(std::string_view json);

}  // namespace multiway
