// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "ssc/types.hpp"

namespace ssc {

// Feature matrix file: 8-byte header (rows, cols as little-endian int32)
// followed by rows*cols little-endian float32 values in row-major order.
void write_feature_matrix(const std::string& path, const Mat& m);
Mat read_feature_matrix(const std::string& path);

}  // namespace ssc
