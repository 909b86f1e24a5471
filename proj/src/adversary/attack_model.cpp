#include "mqdc/adversary/attack_model.hpp"

namespace mqdc::adversary {

std::string attack_name(const AttackModel& attack) {
  struct Namer {
    std::string operator()(const NoAttack&) const { return "no-attack"; }
    std::string operator()(const InterceptResend&) const { return "intercept-resend"; }
    std::string operator()(const ImpersonateUser& a) const {
      return a.guessed_id ? "impersonate" : "impersonate-random-id";
    }
    std::string operator()(const TrentReads&) const { return "trent-reads"; }
  };
  return std::visit(Namer{}, attack);
}

}  // namespace mqdc::adversary
