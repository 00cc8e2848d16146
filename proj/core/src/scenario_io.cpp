#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "paretobf/error.hpp"
#include "paretobf/network.hpp"

namespace paretobf {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "paretobf-scenario";
constexpr int kVersion = 1;

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key + ": missing");
  return *it;
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path + ": expected a string");
  return j.get<std::string>();
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path + ": expected a number");
  return j.get<double>();
}

std::size_t get_count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw SchemaError(path + ": expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

Complex get_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw SchemaError(path + ": expected [re, im]");
  return {get_number(j[0], path + "[0]"), get_number(j[1], path + "[1]")};
}

CVec get_cvec(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SchemaError(path + ": expected a nonempty array of [re, im]");
  CVec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = get_complex(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

CMat get_cmat(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SchemaError(path + ": expected a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  CMat m;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const CVec row = get_cvec(j[r], path + "[" + std::to_string(r) + "]");
    if (cols < 0) {
      cols = row.size();
      m.resize(rows, cols);
    } else if (row.size() != cols) {
      throw SchemaError(path + "[" + std::to_string(r) + "]: ragged matrix row");
    }
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

std::vector<std::size_t> get_receiver_set(const json& j, std::size_t receivers,
                                          const std::string& path) {
  if (!j.is_array()) throw SchemaError(path + ": expected an array of receiver numbers");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const std::size_t r = get_count(j[i], p);
    if (r < 1 || r > receivers) {
      throw SchemaError(p + ": receiver " + std::to_string(r) + " out of range 1.." +
                        std::to_string(receivers));
    }
    out.push_back(r - 1);
  }
  return out;
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

json cvec_json(const CVec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(complex_json(v[i]));
  return arr;
}

json receiver_set_json(const std::vector<std::size_t>& set) {
  json arr = json::array();
  for (std::size_t l : set) arr.push_back(l + 1);
  return arr;
}

Scenario from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("$: expected a JSON object");
  if (auto it = doc.find("format"); it != doc.end() && get_string(*it, "$.format") != kFormat) {
    throw SchemaError("$.format: expected '" + std::string(kFormat) + "'");
  }
  if (auto it = doc.find("version"); it != doc.end() && get_count(*it, "$.version") != kVersion) {
    throw SchemaError("$.version: unsupported version");
  }

  ScenarioLayout layout;
  layout.receivers = get_count(field(doc, "receivers", "$"), "$.receivers");
  layout.noise_power = get_number(field(doc, "noise_power", "$"), "$.noise_power");

  const json& txs = field(doc, "transmitters", "$");
  if (!txs.is_array()) throw SchemaError("$.transmitters: expected an array");
  for (std::size_t t = 0; t < txs.size(); ++t) {
    const std::string p = "$.transmitters[" + std::to_string(t) + "]";
    const std::string id = get_string(field(txs[t], "id", p), p + ".id");
    const auto antennas = static_cast<Eigen::Index>(
        get_count(field(txs[t], "antennas", p), p + ".antennas"));
    auto intended = get_receiver_set(field(txs[t], "intended", p), layout.receivers, p + ".intended");
    if (intended.empty()) {
      throw SchemaError(p + ".intended: must be nonempty (an all -1 direction is infeasible)");
    }
    TransmitterSpec spec = TransmitterSpec::make(id, antennas, intended, layout.receivers);
    if (auto it = txs[t].find("unintended"); it != txs[t].end()) {
      auto unintended = get_receiver_set(*it, layout.receivers, p + ".unintended");
      std::sort(unintended.begin(), unintended.end());
      if (unintended != spec.unintended) {
        throw SchemaError(p + ".unintended: must be the complement of the intended set");
      }
    }
    layout.transmitters.push_back(std::move(spec));
  }

  if (auto it = doc.find("power_groups"); it != doc.end()) {
    if (!it->is_array()) throw SchemaError("$.power_groups: expected an array");
    for (std::size_t g = 0; g < it->size(); ++g) {
      const std::string p = "$.power_groups[" + std::to_string(g) + "]";
      PowerGroup group;
      group.id = get_string(field((*it)[g], "id", p), p + ".id");
      const json& members = field((*it)[g], "members", p);
      if (!members.is_array()) throw SchemaError(p + ".members: expected an array");
      for (std::size_t m = 0; m < members.size(); ++m) {
        group.members.push_back(
            get_string(members[m], p + ".members[" + std::to_string(m) + "]"));
      }
      layout.power_groups.push_back(std::move(group));
    }
  } else {
    for (const auto& tx : layout.transmitters) layout.power_groups.push_back({tx.id, {tx.id}});
  }
  layout.validate();

  std::vector<std::vector<CVec>> channels(layout.transmitters.size(),
                                          std::vector<CVec>(layout.receivers));
  std::vector<std::vector<bool>> present(layout.transmitters.size(),
                                         std::vector<bool>(layout.receivers, false));
  const json& chans = field(doc, "channels", "$");
  if (!chans.is_array()) throw SchemaError("$.channels: expected an array");
  for (std::size_t c = 0; c < chans.size(); ++c) {
    const std::string p = "$.channels[" + std::to_string(c) + "]";
    const std::string id = get_string(field(chans[c], "transmitter", p), p + ".transmitter");
    const std::size_t r = get_count(field(chans[c], "receiver", p), p + ".receiver");
    auto tx_it = std::find_if(layout.transmitters.begin(), layout.transmitters.end(),
                              [&](const TransmitterSpec& tx) { return tx.id == id; });
    if (tx_it == layout.transmitters.end()) {
      throw SchemaError(p + ".transmitter: unknown transmitter '" + id + "'");
    }
    if (r < 1 || r > layout.receivers) throw SchemaError(p + ".receiver: out of range");
    const auto t = static_cast<std::size_t>(tx_it - layout.transmitters.begin());
    const std::string pair = "(transmitter " + id + ", receiver " + std::to_string(r) + ")";
    if (present[t][r - 1]) throw SchemaError(p + ": duplicate channel for pair " + pair);
    present[t][r - 1] = true;

    CVec h;
    if (auto hv = chans[c].find("h"); hv != chans[c].end()) {
      h = get_cvec(*hv, p + ".h");
    } else if (auto hm = chans[c].find("matrix"); hm != chans[c].end()) {
      const CMat mat = get_cmat(*hm, p + ".matrix");
      const json& filter = field(chans[c], "receive_filter", p);
      CVec z;
      if (filter.is_string()) {
        if (filter.get<std::string>() != "svd") {
          throw SchemaError(p + ".receive_filter: expected \"svd\" or an explicit filter vector");
        }
        z = svd_receive_filter(mat);
      } else {
        z = get_cvec(filter, p + ".receive_filter");
        if (z.size() != mat.rows()) {
          throw SchemaError(p + ".receive_filter: dimension mismatch for pair " + pair);
        }
        if (std::abs(z.norm() - 1.0) > 1e-9) {
          throw SchemaError(p + ".receive_filter: must have unit norm");
        }
      }
      h = effective_miso_channel(mat, z);
    } else {
      throw SchemaError(p + ": expected either 'h' or 'matrix' with 'receive_filter'");
    }
    if (h.size() != tx_it->antennas) {
      throw SchemaError(p + ": channel dimension mismatch for pair " + pair + ": got " +
                        std::to_string(h.size()) + ", expected " +
                        std::to_string(tx_it->antennas));
    }
    channels[t][r - 1] = std::move(h);
  }
  for (std::size_t t = 0; t < present.size(); ++t) {
    for (std::size_t l = 0; l < layout.receivers; ++l) {
      if (!present[t][l]) {
        throw SchemaError("$.channels: missing channel for pair (transmitter " +
                          layout.transmitters[t].id + ", receiver " + std::to_string(l + 1) + ")");
      }
    }
  }
  return Scenario(std::move(layout), std::move(channels));
}

json to_json(const Scenario& s) {
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["receivers"] = s.receivers();
  doc["noise_power"] = s.noise_power();
  json txs = json::array();
  for (std::size_t t = 0; t < s.transmitter_count(); ++t) {
    const auto& tx = s.transmitter(t);
    txs.push_back({{"id", tx.id},
                   {"antennas", tx.antennas},
                   {"intended", receiver_set_json(tx.intended)},
                   {"unintended", receiver_set_json(tx.unintended)}});
  }
  doc["transmitters"] = std::move(txs);
  json groups = json::array();
  for (const auto& g : s.power_groups()) groups.push_back({{"id", g.id}, {"members", g.members}});
  doc["power_groups"] = std::move(groups);
  json chans = json::array();
  for (std::size_t t = 0; t < s.transmitter_count(); ++t) {
    for (std::size_t l = 0; l < s.receivers(); ++l) {
      chans.push_back({{"transmitter", s.transmitter(t).id},
                       {"receiver", l + 1},
                       {"h", cvec_json(s.channel(t, l))}});
    }
  }
  doc["channels"] = std::move(chans);
  return doc;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("$: invalid JSON: ") + e.what());
  }
  try {
    return from_json(doc);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("$: ") + e.what());
  }
}

std::string serialize_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SchemaError("cannot write scenario file '" + path.string() + "'");
  out << serialize_scenario(s);
  if (!out) throw SchemaError("failed writing scenario file '" + path.string() + "'");
}

}  // namespace paretobf
