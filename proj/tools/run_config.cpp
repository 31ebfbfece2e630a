#include "run_config.hpp"

#include "run_config_schema.hpp"

#include <rapidjson/document.h>
#include <rapidjson/error/en.h>
#include <rapidjson/schema.h>
#include <rapidjson/stringbuffer.h>
#include <rapidjson/writer.h>

#include <fstream>
#include <memory>
#include <sstream>

using nlohmann::json;

namespace hopfdeg::cli {

namespace {

struct CompiledSchema {
  rapidjson::Document source;
  std::unique_ptr<rapidjson::SchemaDocument> schema;

  CompiledSchema() {
    source.Parse(embedded::kRunConfigSchema);
    if (source.HasParseError()) throw std::logic_error("embedded schema is not valid JSON");
    schema = std::make_unique<rapidjson::SchemaDocument>(source);
  }
};

const rapidjson::SchemaDocument& schema_document() {
  static const CompiledSchema compiled;
  return *compiled.schema;
}

std::string pointer_string(const rapidjson::Pointer& p) {
  rapidjson::StringBuffer sb;
  p.Stringify(sb);
  return sb.GetString();
}

// Which option section each command reads.
const char* section_for(const std::string& command) {
  if (command == "degree") return "degree";
  if (command == "hopf") return "hopf";
  if (command == "seminorm") return "seminorm";
  if (command == "experiment") return "experiment";
  return nullptr;
}

}  // namespace

const char* run_config_schema() { return embedded::kRunConfigSchema; }

void validate_against_schema(const json& doc) {
  const std::string text = doc.dump();
  rapidjson::Document d;
  d.Parse(text.c_str());
  rapidjson::SchemaValidator v(schema_document());
  if (d.Accept(v)) return;
  const std::string where = pointer_string(v.GetInvalidDocumentPointer());
  const std::string keyword = v.GetInvalidSchemaKeyword();
  std::ostringstream msg;
  msg << "config violates schema: keyword '" << keyword << "' at '" << (where.empty() ? "/" : where) << "'";
  if (keyword == "additionalProperties" && !where.empty()) {
    // rapidjson points at the rejected member itself.
    const json::json_pointer jp(where);
    msg << ": unknown key '" << jp.back() << "'";
  }
  throw ConfigError(msg.str());
}

RunConfig resolve_config(const json& doc, const Overrides& o) {
  validate_against_schema(doc);
  RunConfig c;
  c.command = doc["command"].get<std::string>();
  const bool needs_map = c.command != "experiment";
  if (needs_map && !doc.contains("map")) throw ConfigError("command '" + c.command + "' needs a 'map'");
  if (!needs_map && doc.contains("map")) throw ConfigError("command 'experiment' does not take a 'map'");
  for (const char* s : {"degree", "hopf", "seminorm", "experiment"}) {
    const char* own = section_for(c.command);
    if (doc.contains(s) && (own == nullptr || std::string(own) != s)) {
      throw ConfigError(std::string("section '") + s + "' is not used by command '" + c.command + "'");
    }
  }
  if (c.command == "experiment" && !doc.contains("experiment")) {
    throw ConfigError("command 'experiment' needs an 'experiment' section");
  }
  if (needs_map) c.map = doc["map"];
  if (const char* s = section_for(c.command); s && doc.contains(s)) c.section = doc[s];
  if (c.section.is_null()) c.section = json::object();

  c.seed = o.seed ? *o.seed : doc.value("seed", std::uint64_t{1});
  c.threads = o.threads ? *o.threads : doc.value("threads", 0);
  if (c.threads < 0) throw ConfigError("--threads must be >= 0");
  const json out = doc.value("output", json::object());
  c.out_dir = o.out_dir ? *o.out_dir : out.value("dir", std::string());
  c.format = o.format ? *o.format : out.value("format", std::string("csv"));
  if (c.format != "csv" && c.format != "json") throw ConfigError("--format must be csv or json");
  c.plot = out.value("plot", false);
  return c;
}

RunConfig load_config(const std::string& path, const Overrides& o) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return resolve_config(doc, o);
}

json RunConfig::resolved() const {
  json j = {{"schema_version", kSchemaVersion}, {"command", command}, {"seed", seed}, {"threads", threads}};
  if (!map.is_null()) j["map"] = map;
  if (const char* s = section_for(command)) j[s] = section;
  json out = {{"format", format}, {"plot", plot}};
  if (!out_dir.empty()) out["dir"] = out_dir;
  j["output"] = out;
  return j;
}

}  // namespace hopfdeg::cli
