#include "paretobf/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "paretobf/error.hpp"
#include "paretobf/rng.hpp"

namespace paretobf {

TransmitterSpec TransmitterSpec::make(std::string id, Eigen::Index antennas,
                                      std::vector<std::size_t> intended, std::size_t receivers) {
  std::sort(intended.begin(), intended.end());
  intended.erase(std::unique(intended.begin(), intended.end()), intended.end());
  std::vector<std::size_t> unintended;
  for (std::size_t l = 0; l < receivers; ++l) {
    if (!std::binary_search(intended.begin(), intended.end(), l)) unintended.push_back(l);
  }
  return {std::move(id), antennas, std::move(intended), std::move(unintended)};
}

void ScenarioLayout::validate() const {
  if (receivers == 0) throw SchemaError("receivers: must be at least 1");
  if (!std::isfinite(noise_power) || noise_power <= 0.0) {
    throw SchemaError("noise_power: must be positive and finite");
  }
  if (transmitters.empty()) throw SchemaError("transmitters: at least one transmitter required");

  std::set<std::string> ids;
  for (std::size_t t = 0; t < transmitters.size(); ++t) {
    const auto& tx = transmitters[t];
    const std::string where = "transmitters[" + std::to_string(t) + "]";
    if (tx.id.empty()) throw SchemaError(where + ".id: must be nonempty");
    if (!ids.insert(tx.id).second) throw SchemaError(where + ".id: duplicate id '" + tx.id + "'");
    if (tx.antennas < 1 || tx.antennas > 64) {
      throw SchemaError(where + ".antennas: must be in [1, 64]");
    }
    if (tx.intended.empty()) {
      throw SchemaError(where + ".intended: must be nonempty (an all -1 direction is infeasible)");
    }
    std::vector<bool> seen(receivers, false);
    auto mark = [&](const std::vector<std::size_t>& set, const char* field) {
      for (std::size_t l : set) {
        if (l >= receivers) {
          throw SchemaError(where + "." + field + ": receiver " + std::to_string(l + 1) +
                            " out of range 1.." + std::to_string(receivers));
        }
        if (seen[l]) {
          throw SchemaError(where + "." + field + ": receiver " + std::to_string(l + 1) +
                            " listed twice");
        }
        seen[l] = true;
      }
    };
    mark(tx.intended, "intended");
    mark(tx.unintended, "unintended");
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      throw SchemaError(where + ": intended and unintended sets must cover every receiver");
    }
    if (!std::is_sorted(tx.intended.begin(), tx.intended.end()) ||
        !std::is_sorted(tx.unintended.begin(), tx.unintended.end())) {
      throw SchemaError(where + ": receiver sets must be sorted");
    }
  }

  std::set<std::string> group_ids;
  std::set<std::string> assigned;
  for (std::size_t g = 0; g < power_groups.size(); ++g) {
    const auto& group = power_groups[g];
    const std::string where = "power_groups[" + std::to_string(g) + "]";
    if (group.id.empty()) throw SchemaError(where + ".id: must be nonempty");
    if (!group_ids.insert(group.id).second) {
      throw SchemaError(where + ".id: duplicate id '" + group.id + "'");
    }
    if (group.members.empty()) throw SchemaError(where + ".members: must be nonempty");
    Eigen::Index antennas = -1;
    for (const auto& member : group.members) {
      auto it = std::find_if(transmitters.begin(), transmitters.end(),
                             [&](const TransmitterSpec& tx) { return tx.id == member; });
      if (it == transmitters.end()) {
        throw SchemaError(where + ".members: unknown transmitter '" + member + "'");
      }
      if (!assigned.insert(member).second) {
        throw SchemaError(where + ".members: transmitter '" + member +
                          "' belongs to more than one power group");
      }
      if (antennas >= 0 && it->antennas != antennas) {
        throw SchemaError(where + ".members: members must share an antenna count");
      }
      antennas = it->antennas;
    }
  }
  for (const auto& tx : transmitters) {
    if (!assigned.contains(tx.id)) {
      throw SchemaError("power_groups: transmitter '" + tx.id + "' is in no power group");
    }
  }
}

Scenario::Scenario(ScenarioLayout layout, std::vector<std::vector<CVec>> channels)
    : layout_(std::move(layout)), channels_(std::move(channels)) {
  layout_.validate();
  const auto& txs = layout_.transmitters;
  if (channels_.size() != txs.size()) {
    throw SchemaError("channels: expected " + std::to_string(txs.size()) + " transmitters, got " +
                      std::to_string(channels_.size()));
  }
  for (std::size_t t = 0; t < txs.size(); ++t) {
    if (channels_[t].size() != layout_.receivers) {
      throw SchemaError("channels: transmitter '" + txs[t].id + "' has " +
                        std::to_string(channels_[t].size()) + " channels, expected " +
                        std::to_string(layout_.receivers));
    }
    for (std::size_t l = 0; l < layout_.receivers; ++l) {
      const CVec& h = channels_[t][l];
      const std::string pair =
          "(transmitter " + txs[t].id + ", receiver " + std::to_string(l + 1) + ")";
      if (h.size() != txs[t].antennas) {
        throw SchemaError("channels: pair " + pair + " has dimension " + std::to_string(h.size()) +
                          ", expected " + std::to_string(txs[t].antennas));
      }
      if (!h.allFinite()) throw SchemaError("channels: pair " + pair + " has non-finite entries");
    }
  }
  group_of_.assign(txs.size(), 0);
  members_.resize(layout_.power_groups.size());
  for (std::size_t g = 0; g < layout_.power_groups.size(); ++g) {
    for (const auto& member : layout_.power_groups[g].members) {
      const std::size_t t = transmitter_index(member);
      group_of_[t] = g;
      members_[g].push_back(t);
    }
  }
}

std::size_t Scenario::transmitter_index(const std::string& id) const {
  const auto& txs = layout_.transmitters;
  for (std::size_t t = 0; t < txs.size(); ++t) {
    if (txs[t].id == id) return t;
  }
  throw DomainError("unknown transmitter id '" + id + "'");
}

Scenario Scenario::with_noise_power(double noise_power) const {
  ScenarioLayout layout = layout_;
  layout.noise_power = noise_power;
  return Scenario(std::move(layout), channels_);
}

bool operator==(const Scenario& a, const Scenario& b) {
  if (!(a.layout_ == b.layout_)) return false;
  for (std::size_t t = 0; t < a.channels_.size(); ++t) {
    for (std::size_t l = 0; l < a.channels_[t].size(); ++l) {
      const CVec& x = a.channels_[t][l];
      const CVec& y = b.channels_[t][l];
      if (x.size() != y.size() || !(x.array() == y.array()).all()) return false;
    }
  }
  return true;
}

DirectionVector direction_vector(const TransmitterSpec& tx, std::size_t receivers) {
  std::vector<int> signs(receivers, -1);
  for (std::size_t l : tx.intended) {
    if (l >= receivers) throw DomainError("intended receiver out of range");
    signs[l] = 1;
  }
  return DirectionVector(std::move(signs));
}

DirectionVector direction_vector(const Scenario& s, const std::string& transmitter_id) {
  return direction_vector(s.transmitter(s.transmitter_index(transmitter_id)), s.receivers());
}

Scenario generate_channels(std::uint64_t seed, const ScenarioLayout& layout) {
  layout.validate();
  std::vector<std::vector<CVec>> channels(layout.transmitters.size());
  for (const auto& group : layout.power_groups) {
    for (const auto& member : group.members) {
      const auto it = std::find_if(layout.transmitters.begin(), layout.transmitters.end(),
                                   [&](const TransmitterSpec& tx) { return tx.id == member; });
      const auto t = static_cast<std::size_t>(it - layout.transmitters.begin());
      channels[t].reserve(layout.receivers);
      for (std::size_t l = 0; l < layout.receivers; ++l) {
        CounterRng rng(stream_key(seed, group.id, l));
        channels[t].push_back(rng.complex_normal_vector(it->antennas));
      }
    }
  }
  return Scenario(layout, std::move(channels));
}

double snr_to_noise(double snr_db) {
  if (!std::isfinite(snr_db)) throw DomainError("SNR must be finite");
  return std::pow(10.0, -snr_db / 10.0);
}

ScenarioLayout ic_layout(std::size_t users, Eigen::Index antennas, double noise_power) {
  ScenarioLayout layout;
  layout.receivers = users;
  layout.noise_power = noise_power;
  for (std::size_t k = 0; k < users; ++k) {
    const std::string id = std::to_string(k + 1);
    layout.transmitters.push_back(TransmitterSpec::make(id, antennas, {k}, users));
    layout.power_groups.push_back({id, {id}});
  }
  layout.validate();
  return layout;
}

ScenarioLayout mixed_layout(double noise_power, Eigen::Index antennas) {
  ScenarioLayout layout;
  layout.receivers = 3;
  layout.noise_power = noise_power;
  layout.transmitters = {
      TransmitterSpec::make("11", antennas, {0}, 3),
      TransmitterSpec::make("12", antennas, {1}, 3),
      TransmitterSpec::make("2", antennas, {1, 2}, 3),
  };
  layout.power_groups = {{"1", {"11", "12"}}, {"2", {"2"}}};
  layout.validate();
  return layout;
}

CVec effective_miso_channel(const CMat& h, const CVec& z) {
  if (z.size() != h.rows()) {
    throw DimensionError("receive filter has dimension " + std::to_string(z.size()) +
                         ", channel matrix has " + std::to_string(h.rows()) + " rows");
  }
  if (std::abs(z.norm() - 1.0) > 1e-9) throw DomainError("receive filter must have unit norm");
  return h.adjoint() * z;
}

CVec svd_receive_filter(const CMat& h) {
  if (h.size() == 0) throw DimensionError("empty channel matrix");
  Eigen::JacobiSVD<CMat> svd(h, Eigen::ComputeThinU);
  CVec z = svd.matrixU().col(0);
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (std::abs(z[i]) > 1e-12) {
      z *= std::conj(z[i]) / std::abs(z[i]);
      break;
    }
  }
  return z.normalized();
}

CVec mrc_receive_filter(const CMat& h, const CVec& w) {
  if (w.size() != h.cols()) throw DimensionError("beamformer does not match channel columns");
  CVec z = h * w;
  if (z.norm() == 0.0) throw DomainError("MRC filter undefined: H w = 0");
  return z.normalized();
}

}  // namespace paretobf
