#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "acwa/errors.hpp"
#include "acwa/rng.hpp"
#include "acwa/scenario_io.hpp"
#include "acwa/sensors.hpp"

// Labeled data-poisoning attacks on sensor streams.
//
// An attack targets exactly one (sensor, field) pair over an inclusive time
// window. Six kinds:
//
//   bias      adds a constant offset
//   drift     adds offset growing linearly at `rate` per second in-window
//   stuck_at  freezes the field at a configured value, or at the first
//             in-window clean reading ("hold": "last")
//   noise     widens the field's Gaussian noise floor sigma by a factor m >= 1
//             (adds an independent sigma*sqrt(m^2-1) term, so the tampered
//             reading is distributed as if emitted with sigma*m; a no-op on
//             fields with a zero noise floor)
//   dropout   deletes each in-window record with the given probability
//   replay    substitutes the sensor's own clean readings from an equally
//             long window starting at `source_start`
//
// Every in-window record of the targeted sensor is labeled attacked = true
// (ground truth covers the window, whether or not the sampled value visibly
// moved); records outside every window are byte-identical to the clean
// stream. Randomized kinds draw from per-attack substreams of the attack's
// own seed, so reruns are identical and attacks never perturb each other.
// Two attacks may not overlap in time on the same (sensor, field).

namespace acwa {

enum class AttackKind { Bias, Drift, StuckAt, Noise, Dropout, Replay };

inline const char* to_string(AttackKind k) {
  switch (k) {
    case AttackKind::Bias: return "bias";
    case AttackKind::Drift: return "drift";
    case AttackKind::StuckAt: return "stuck_at";
    case AttackKind::Noise: return "noise";
    case AttackKind::Dropout: return "dropout";
    case AttackKind::Replay: return "replay";
  }
  return "?";
}

inline AttackKind attack_kind_from(const std::string& name) {
  if (name == "bias") return AttackKind::Bias;
  if (name == "drift") return AttackKind::Drift;
  if (name == "stuck_at") return AttackKind::StuckAt;
  if (name == "noise") return AttackKind::Noise;
  if (name == "dropout") return AttackKind::Dropout;
  if (name == "replay") return AttackKind::Replay;
  throw ValidationError("unknown attack kind '" + name + "'");
}

struct AttackSpec {
  AttackKind kind = AttackKind::Bias;
  std::string sensor_id;
  std::string field;
  double t_start = 0.0;  // window [t_start, t_end], inclusive [s]
  double t_end = 0.0;
  std::uint64_t seed = 0;

  double offset = 0.0;           // bias
  double rate = 0.0;             // drift [field units / s]
  bool stuck_use_last = true;    // stuck_at
  double stuck_value = 0.0;      // stuck_at (when !stuck_use_last)
  double sigma_multiplier = 1.0; // noise
  double probability = 0.0;      // dropout
  double source_start = 0.0;     // replay
};

// Window/overlap checks that don't need the scenario.
inline void check_attack_consistency(const std::vector<AttackSpec>& attacks) {
  for (const AttackSpec& a : attacks) {
    if (!(a.t_start >= 0.0) || !(a.t_start < a.t_end)) {
      throw ValidationError("attack on '" + a.sensor_id + "." + a.field +
                            "': window needs 0 <= t_start < t_end");
    }
  }
  for (std::size_t i = 0; i < attacks.size(); ++i) {
    for (std::size_t j = i + 1; j < attacks.size(); ++j) {
      const AttackSpec& a = attacks[i];
      const AttackSpec& b = attacks[j];
      if (a.sensor_id == b.sensor_id && a.field == b.field &&
          a.t_start <= b.t_end && b.t_start <= a.t_end) {
        throw ValidationError(
            "attacks " + std::to_string(i) + " and " + std::to_string(j) +
            " overlap on '" + a.sensor_id + "." + a.field +
            "'; at most one attack per sensor field at any instant");
      }
    }
  }
}

// Duration-dependent part of the window invariant.
inline void check_attack_windows(const std::vector<AttackSpec>& attacks,
                                 double duration) {
  for (const AttackSpec& a : attacks) {
    if (a.t_end > duration) {
      throw ValidationError("attack on '" + a.sensor_id + "." + a.field +
                            "': window ends at " +
                            detail_validate::num(a.t_end) +
                            " s, after the " +
                            detail_validate::num(duration) + " s run");
    }
    if (a.kind == AttackKind::Replay) {
      const double span = a.t_end - a.t_start;
      if (a.source_start < 0.0 || a.source_start + span > duration) {
        throw ValidationError("replay attack on '" + a.sensor_id + "." +
                              a.field + "': source window [" +
                              detail_validate::num(a.source_start) + ", " +
                              detail_validate::num(a.source_start + span) +
                              "] s falls outside the run");
      }
    }
  }
}

// Apply all attacks to a clean stream. The clean input is never modified;
// replay sources and stuck_at captures read the clean values, so attack
// effects never compound through each other.
inline std::vector<SensorRecord> apply_attacks(
    const std::vector<SensorRecord>& clean,
    const std::vector<AttackSpec>& attacks, const BindingSet& bindings) {
  check_attack_consistency(attacks);
  std::vector<SensorRecord> out = clean;
  std::vector<bool> drop(out.size(), false);

  for (const AttackSpec& a : attacks) {
    const SensorBinding* sb = nullptr;
    for (const SensorBinding& b : bindings.sensors) {
      if (b.sensor_id == a.sensor_id) sb = &b;
    }
    if (!sb) {
      throw ValidationError("attack targets unknown sensor '" + a.sensor_id +
                            "'");
    }
    double base_sigma = -1.0;
    for (const FieldBinding& f : sb->fields) {
      if (f.name == a.field) base_sigma = f.noise_sigma;
    }
    if (base_sigma < 0.0) {
      throw ValidationError("attack targets field '" + a.field +
                            "' which sensor '" + a.sensor_id +
                            "' does not report");
    }

    GaussianRng rng(substream_seed(
        a.seed, std::string(to_string(a.kind)) + ":" + a.sensor_id + ":" +
                    a.field));
    bool stuck_captured = false;
    double stuck = a.stuck_value;

    // Replay needs the sensor's clean record at an arbitrary grid time.
    std::unordered_map<long long, std::size_t> by_time;
    if (a.kind == AttackKind::Replay) {
      for (std::size_t i = 0; i < clean.size(); ++i) {
        if (clean[i].sensor_id == a.sensor_id) {
          by_time[clean[i].timestamp_ms] = i;
        }
      }
    }

    for (std::size_t i = 0; i < out.size(); ++i) {
      SensorRecord& r = out[i];
      if (r.sensor_id != a.sensor_id) continue;
      const double t =
          static_cast<double>(r.timestamp_ms - bindings.t0_epoch_ms) / 1000.0;
      if (t < a.t_start || t > a.t_end) continue;
      r.attacked = true;
      double* v = r.find(a.field);
      if (!v) {
        throw ContractViolation("record of '" + a.sensor_id +
                                "' lacks field '" + a.field + "'");
      }
      switch (a.kind) {
        case AttackKind::Bias:
          *v += a.offset;
          break;
        case AttackKind::Drift:
          *v += a.rate * (t - a.t_start);
          break;
        case AttackKind::StuckAt:
          if (a.stuck_use_last && !stuck_captured) {
            stuck = *clean[i].find(a.field);
            stuck_captured = true;
          }
          *v = stuck;
          break;
        case AttackKind::Noise:
          if (base_sigma > 0.0 && a.sigma_multiplier > 1.0) {
            *v += base_sigma *
                  std::sqrt(a.sigma_multiplier * a.sigma_multiplier - 1.0) *
                  rng.normal();
          }
          break;
        case AttackKind::Dropout:
          if (rng.uniform() < a.probability) drop[i] = true;
          break;
        case AttackKind::Replay: {
          const long long src_ms =
              bindings.t0_epoch_ms +
              static_cast<long long>(
                  std::llround((a.source_start + (t - a.t_start)) * 1000.0));
          const auto it = by_time.find(src_ms);
          if (it == by_time.end()) {
            throw ValidationError(
                "replay attack on '" + a.sensor_id + "." + a.field +
                "': the sensor has no record at the source instant t = " +
                detail_validate::num(a.source_start + (t - a.t_start)) + " s");
          }
          *v = *clean[it->second].find(a.field);
          break;
        }
      }
    }
  }

  std::vector<SensorRecord> kept;
  kept.reserve(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!drop[i]) kept.push_back(std::move(out[i]));
  }
  return kept;
}

// ---- attacks file I/O -----------------------------------------------------

inline std::vector<AttackSpec> parse_attacks(const ojson& doc) {
  using detail_io::get_number;
  if (!doc.is_object() || !doc.contains("attacks") ||
      !doc["attacks"].is_array()) {
    throw ValidationError("attacks: root must be an object with an 'attacks' array");
  }
  detail_io::require_keys(doc, "attacks", {"attacks"});
  std::vector<AttackSpec> out;
  for (const auto& ja : doc["attacks"]) {
    detail_io::require_keys(ja, "attack",
                            {"kind", "sensor_id", "field", "window", "seed",
                             "offset", "rate", "value", "hold", "multiplier",
                             "probability", "source_start"});
    for (const char* req : {"kind", "sensor_id", "field", "window"}) {
      if (!ja.contains(req)) {
        throw ValidationError(std::string("attack: missing '") + req + "'");
      }
    }
    AttackSpec a;
    a.kind = attack_kind_from(ja["kind"].get<std::string>());
    a.sensor_id = ja["sensor_id"].get<std::string>();
    a.field = ja["field"].get<std::string>();
    const std::string where =
        "attack on '" + a.sensor_id + "." + a.field + "'";
    if (!ja["window"].is_array() || ja["window"].size() != 2) {
      throw ValidationError(where + ": 'window' must be [t_start, t_end]");
    }
    a.t_start = get_number(ja["window"][0], where + " window start");
    a.t_end = get_number(ja["window"][1], where + " window end");
    if (ja.contains("seed")) {
      a.seed = static_cast<std::uint64_t>(get_number(ja["seed"], where + " seed"));
    }
    switch (a.kind) {
      case AttackKind::Bias:
        if (!ja.contains("offset")) {
          throw ValidationError(where + ": bias needs 'offset'");
        }
        a.offset = get_number(ja["offset"], where + " offset");
        break;
      case AttackKind::Drift:
        if (!ja.contains("rate")) {
          throw ValidationError(where + ": drift needs 'rate' (units/s)");
        }
        a.rate = get_number(ja["rate"], where + " rate");
        break;
      case AttackKind::StuckAt:
        if (ja.contains("value")) {
          a.stuck_use_last = false;
          a.stuck_value = get_number(ja["value"], where + " value");
        } else if (ja.contains("hold") &&
                   ja["hold"].get<std::string>() == "last") {
          a.stuck_use_last = true;
        } else {
          throw ValidationError(where +
                                ": stuck_at needs 'value' or \"hold\": \"last\"");
        }
        break;
      case AttackKind::Noise:
        if (!ja.contains("multiplier")) {
          throw ValidationError(where + ": noise needs 'multiplier'");
        }
        a.sigma_multiplier = get_number(ja["multiplier"], where + " multiplier");
        if (!(a.sigma_multiplier >= 1.0)) {
          throw ValidationError(where + ": noise multiplier must be >= 1");
        }
        break;
      case AttackKind::Dropout:
        if (!ja.contains("probability")) {
          throw ValidationError(where + ": dropout needs 'probability'");
        }
        a.probability = get_number(ja["probability"], where + " probability");
        if (a.probability < 0.0 || a.probability > 1.0) {
          throw ValidationError(where + ": probability must lie in [0, 1]");
        }
        break;
      case AttackKind::Replay:
        if (!ja.contains("source_start")) {
          throw ValidationError(where + ": replay needs 'source_start'");
        }
        a.source_start = get_number(ja["source_start"], where + " source_start");
        break;
    }
    out.push_back(std::move(a));
  }
  check_attack_consistency(out);
  return out;
}

inline std::vector<AttackSpec> load_attacks(const std::string& path) {
  const ojson doc = detail_io::read_json_file(path);  // path-prefixed errors
  try {
    return parse_attacks(doc);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace acwa
