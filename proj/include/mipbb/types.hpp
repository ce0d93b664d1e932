// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace mipbb {

enum class VarType { Binary, Integer, ImpliedInteger, Continuous };

inline bool is_integer_type(VarType t) { return t != VarType::Continuous; }

} // namespace mipbb
