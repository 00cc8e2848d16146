#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "paretobf/hermitian.hpp"
#include "paretobf/weights.hpp"

namespace paretobf {

/// One (possibly virtual) transmitter. Receiver indices are 0-based.
struct TransmitterSpec {
  std::string id;
  Eigen::Index antennas = 1;
  std::vector<std::size_t> intended;    // sorted
  std::vector<std::size_t> unintended;  // sorted complement of `intended`

  /// Builds a spec whose unintended set is the complement of `intended` in {0..receivers-1}.
  static TransmitterSpec make(std::string id, Eigen::Index antennas,
                              std::vector<std::size_t> intended, std::size_t receivers);

  friend bool operator==(const TransmitterSpec&, const TransmitterSpec&) = default;
};

/// Transmitters sharing one unit power budget. A broadcast transmitter split
/// into per-receiver virtual transmitters forms one group.
struct PowerGroup {
  std::string id;
  std::vector<std::string> members;

  friend bool operator==(const PowerGroup&, const PowerGroup&) = default;
};

/// Everything about a network except its channel realization.
struct ScenarioLayout {
  std::size_t receivers = 0;
  double noise_power = 1.0;
  std::vector<TransmitterSpec> transmitters;
  std::vector<PowerGroup> power_groups;

  /// Throws SchemaError describing the first violated invariant.
  void validate() const;

  friend bool operator==(const ScenarioLayout&, const ScenarioLayout&) = default;
};

/// Immutable network description: layout plus one channel vector per
/// (transmitter, receiver) pair, of the transmitter's antenna dimension.
class Scenario {
 public:
  /// channels[t][l] is the channel from transmitter t to receiver l.
  Scenario(ScenarioLayout layout, std::vector<std::vector<CVec>> channels);

  const ScenarioLayout& layout() const { return layout_; }
  std::size_t receivers() const { return layout_.receivers; }
  std::size_t transmitter_count() const { return layout_.transmitters.size(); }
  double noise_power() const { return layout_.noise_power; }
  const TransmitterSpec& transmitter(std::size_t t) const { return layout_.transmitters[t]; }
  const std::vector<PowerGroup>& power_groups() const { return layout_.power_groups; }

  const CVec& channel(std::size_t t, std::size_t receiver) const { return channels_[t][receiver]; }
  /// Channels of transmitter t to receivers 0..K-1.
  const std::vector<CVec>& channels_of(std::size_t t) const { return channels_[t]; }

  /// Throws DomainError for an unknown id.
  std::size_t transmitter_index(const std::string& id) const;
  /// Index of the power group containing transmitter t.
  std::size_t group_of(std::size_t t) const { return group_of_[t]; }
  /// Transmitter indices of group g, in member order.
  const std::vector<std::size_t>& group_members(std::size_t g) const { return members_[g]; }

  Scenario with_noise_power(double noise_power) const;

  friend bool operator==(const Scenario& a, const Scenario& b);

 private:
  ScenarioLayout layout_;
  std::vector<std::vector<CVec>> channels_;
  std::vector<std::size_t> group_of_;
  std::vector<std::vector<std::size_t>> members_;
};

/// e_{k,l} = +1 for intended receivers of k, -1 otherwise.
DirectionVector direction_vector(const TransmitterSpec& tx, std::size_t receivers);
DirectionVector direction_vector(const Scenario& s, const std::string& transmitter_id);

/// Fills every channel with i.i.d. CN(0,1) entries. The stream of pair
/// (group g, receiver l) is keyed by (seed, group id, l); members of a power
/// group therefore share their physical channels.
Scenario generate_channels(std::uint64_t seed, const ScenarioLayout& layout);

/// sigma^2 = 10^(-snr_db/10) for a unit power budget.
double snr_to_noise(double snr_db);

/// K-user MISO interference channel: transmitter k (id "k", 1-based) serves receiver k.
ScenarioLayout ic_layout(std::size_t users, Eigen::Index antennas, double noise_power);

/// Two physical transmitters with three antennas each and three receivers:
/// transmitter 1 broadcasts to receivers 1 and 2 as virtual transmitters 11
/// and 12 (one power group), transmitter 2 multicasts to receivers 2 and 3
/// and interferes at receiver 1.
ScenarioLayout mixed_layout(double noise_power, Eigen::Index antennas = 3);

/// h_eff = H^H z, so that |z^H H w|^2 = |h_eff^H w|^2 for every w.
/// H is R x N, z a unit R-vector.
CVec effective_miso_channel(const CMat& h, const CVec& z);

/// Left singular vector of the largest singular value of H (phase-normalized).
CVec svd_receive_filter(const CMat& h);

/// Maximum ratio combining filter H w / ||H w||.
CVec mrc_receive_filter(const CMat& h, const CVec& w);

/// Scenario file (JSON) I/O. Receivers are 1-based in the file, complex
/// numbers are [re, im] pairs, doubles are written with round-trip precision.
Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& s, const std::filesystem::path& path);
Scenario parse_scenario(const std::string& text);
std::string serialize_scenario(const Scenario& s);

}  // namespace paretobf
