// Copyright 2026 The MRFC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mrfc/network_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "mrfc/errors.hpp"

namespace mrfc {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const std::string& ctx) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw InvalidInputError(ctx + ": missing key \"" + key + "\"");
  return *it;
}

int require_int(const json& obj, const char* key, const std::string& ctx) {
  const json& v = require(obj, key, ctx);
  if (!v.is_number_integer())
    throw InvalidInputError(ctx + ": \"" + key + "\" must be an integer");
  return v.get<int>();
}

double require_number(const json& obj, const char* key, const std::string& ctx) {
  const json& v = require(obj, key, ctx);
  if (!v.is_number())
    throw InvalidInputError(ctx + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

json utility_to_json(const UtilitySpec& u) {
  json j{{"family", u.family_name()}, {"weight", u.weight()}};
  if (u.family() == UtilityFamily::kAlphaFair) j["alpha"] = u.alpha();
  return j;
}

UtilitySpec utility_from_json(const json& j, const std::string& ctx) {
  if (!j.is_object()) throw InvalidInputError(ctx + ": utility must be an object");
  reject_unknown_keys(j, {"family", "weight", "alpha"}, ctx.c_str());
  const json& fam = require(j, "family", ctx);
  if (!fam.is_string())
    throw InvalidInputError(ctx + ": utility family must be a string");
  const std::string family = fam.get<std::string>();
  const double weight = j.contains("weight") ? require_number(j, "weight", ctx) : 1.0;
  if (family == "log") {
    if (j.contains("alpha"))
      throw InvalidInputError(ctx + ": log utility takes no alpha");
    return UtilitySpec::Log(weight);
  }
  if (family == "alpha_fair")
    return UtilitySpec::AlphaFair(weight, require_number(j, "alpha", ctx));
  throw InvalidInputError(ctx + ": unknown utility family \"" + family + "\"");
}

}  // namespace

void reject_unknown_keys(const json& object,
                         std::initializer_list<const char*> allowed,
                         const char* context) {
  for (const auto& item : object.items()) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || item.key() == k;
    if (!ok)
      throw InvalidInputError(std::string(context) + ": unknown key \"" +
                              item.key() + "\"");
  }
}

json instance_to_json(const Instance& instance) {
  json links = json::array();
  for (const Link& k : instance.network().links())
    links.push_back({{"tx", k.tx}, {"rx", k.rx}, {"capacity", k.capacity}});
  json sessions = json::array();
  for (const Session& s : instance.sessions())
    sessions.push_back(
        {{"src", s.src}, {"dst", s.dst}, {"utility", utility_to_json(s.utility)}});
  return json{{"format", kNetworkFormat},
              {"version", kNetworkFormatVersion},
              {"nodes", instance.node_count()},
              {"links", std::move(links)},
              {"sessions", std::move(sessions)}};
}

Instance instance_from_json(const json& doc) {
  const std::string ctx = "network file";
  if (!doc.is_object()) throw InvalidInputError(ctx + ": top level must be an object");
  reject_unknown_keys(doc, {"format", "version", "nodes", "links", "sessions"},
                      ctx.c_str());
  const json& format = require(doc, "format", ctx);
  if (!format.is_string() || format.get<std::string>() != kNetworkFormat)
    throw InvalidInputError(ctx + ": format must be \"" +
                            std::string(kNetworkFormat) + "\"");
  const int version = require_int(doc, "version", ctx);
  if (version != kNetworkFormatVersion)
    throw InvalidInputError(ctx + ": unsupported version " + std::to_string(version));
  const int nodes = require_int(doc, "nodes", ctx);

  const json& jl = require(doc, "links", ctx);
  if (!jl.is_array()) throw InvalidInputError(ctx + ": links must be an array");
  std::vector<Link> links;
  for (std::size_t i = 0; i < jl.size(); ++i) {
    const std::string lc = ctx + ": links[" + std::to_string(i) + "]";
    if (!jl[i].is_object()) throw InvalidInputError(lc + " must be an object");
    reject_unknown_keys(jl[i], {"tx", "rx", "capacity"}, lc.c_str());
    links.push_back({require_int(jl[i], "tx", lc), require_int(jl[i], "rx", lc),
                     require_number(jl[i], "capacity", lc)});
  }

  const json& js = require(doc, "sessions", ctx);
  if (!js.is_array()) throw InvalidInputError(ctx + ": sessions must be an array");
  std::vector<Session> sessions;
  for (std::size_t i = 0; i < js.size(); ++i) {
    const std::string sc = ctx + ": sessions[" + std::to_string(i) + "]";
    if (!js[i].is_object()) throw InvalidInputError(sc + " must be an object");
    reject_unknown_keys(js[i], {"src", "dst", "utility"}, sc.c_str());
    Session s;
    s.src = require_int(js[i], "src", sc);
    s.dst = require_int(js[i], "dst", sc);
    s.utility = js[i].contains("utility")
                    ? utility_from_json(js[i]["utility"], sc + ".utility")
                    : UtilitySpec::Log(1.0);
    sessions.push_back(s);
  }
  return Instance::Create(Network::Create(nodes, std::move(links)),
                          std::move(sessions));
}

Instance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInputError(path.string() + ": " + e.what());
  }
  return instance_from_json(doc);
}

void write_instance(const std::filesystem::path& path, const Instance& instance) {
  write_file_atomically(path, instance_to_json(instance).dump(2) + "\n");
}

void write_file_atomically(const std::filesystem::path& path,
                           const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInputError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw InvalidInputError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InvalidInputError("cannot move output into place at " + path.string());
  }
}

}  // namespace mrfc
