#include <fstream>
#include <json.hpp>
#include <sstream>

#include "rlnc/errors.hpp"
#include "rlnc/network.hpp"

namespace rlnc {
namespace {

using nlohmann::json;

const json& member(const json& obj, const char* key, const std::string& loc) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(loc, std::string("missing \"") + key + "\"");
  return *it;
}

std::string string_at(const json& v, const std::string& loc) {
  if (!v.is_string()) throw ParseError(loc, "expected a string");
  return v.get<std::string>();
}

std::vector<std::string> strings_at(const json& v, const std::string& loc) {
  if (!v.is_array()) throw ParseError(loc, "expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(string_at(v[i], loc + "/" + std::to_string(i)));
  return out;
}

}  // namespace

Network parse_network(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), "malformed JSON");
  }
  if (!doc.is_object()) throw ParseError("", "network document must be a JSON object");

  std::string name;
  if (auto it = doc.find("name"); it != doc.end()) name = string_at(*it, "/name");
  auto nodes = strings_at(member(doc, "nodes", ""), "/nodes");
  auto source = string_at(member(doc, "source", ""), "/source");
  auto sinks = strings_at(member(doc, "sinks", ""), "/sinks");

  const json& chans = member(doc, "channels", "");
  if (!chans.is_array()) throw ParseError("/channels", "expected an array");
  std::vector<Channel> channels;
  for (std::size_t i = 0; i < chans.size(); ++i) {
    const auto loc = "/channels/" + std::to_string(i);
    const json& c = chans[i];
    if (!c.is_object()) throw ParseError(loc, "expected an object");
    channels.push_back({string_at(member(c, "id", loc), loc + "/id"),
                        string_at(member(c, "tail", loc), loc + "/tail"),
                        string_at(member(c, "head", loc), loc + "/head")});
  }
  return Network(std::move(name), std::move(nodes), std::move(source), std::move(sinks),
                 std::move(channels));
}

std::string serialize_network(const Network& net) {
  // ordered_json keeps the documented key order in the output.
  nlohmann::ordered_json doc;
  doc["name"] = net.name();
  doc["nodes"] = net.nodes();
  doc["source"] = net.source();
  doc["sinks"] = net.sinks();
  doc["channels"] = nlohmann::ordered_json::array();
  for (const auto& c : net.channels())
    doc["channels"].push_back(
        nlohmann::ordered_json{{"id", c.id}, {"tail", c.tail}, {"head", c.head}});
  return doc.dump(2) + "\n";
}

Network load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open network file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

void save_network(const Network& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << serialize_network(net);
}

}  // namespace rlnc
