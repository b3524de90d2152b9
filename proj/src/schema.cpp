#include "latentvqe/schema.hpp"

#include "latentvqe/errors.hpp"

namespace latentvqe {

void require_schema(const nlohmann::json& j, std::string_view kind) {
  if (!j.is_object() || !j.contains("schema_version") || !j["schema_version"].is_string())
    throw ArtifactError("artifact has no schema_version field");
  const auto version = j["schema_version"].get<std::string>();
  if (version != kSchemaVersion)
    throw ArtifactError("schema version mismatch: file has '" + version + "', expected '" +
                        std::string(kSchemaVersion) + "'");
  if (!j.contains("kind") || j["kind"] != kind)
    throw ArtifactError("expected a '" + std::string(kind) + "' artifact");
}

nlohmann::json schema_header(std::string_view kind) {
  return {{"schema_version", std::string(kSchemaVersion)}, {"kind", std::string(kind)}};
}

} // namespace latentvqe
