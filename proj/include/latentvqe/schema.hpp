#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

namespace latentvqe {

// Embedded in every artifact written by the toolkit; readers reject anything else.
inline constexpr std::string_view kSchemaVersion = "latentvqe/1";

/// Throws ArtifactError if `j` lacks the current schema version or has the
/// wrong artifact kind.
void require_schema(const nlohmann::json& j, std::string_view kind);

/// {"schema_version": ..., "kind": kind}
nlohmann::json schema_header(std::string_view kind);

} // namespace latentvqe
