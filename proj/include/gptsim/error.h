#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gptsim {

enum class ErrorCode {
    invalid_argument,
    not_normalized,
    outside_cone,
    model_mismatch,
    empty_ensemble,
    not_pure,
    probability_out_of_range,
    infeasible,
    unbounded_model,
    unsupported_model,
    domain_error,
    marginal_mismatch,
    rank_deficit,
    parse_error,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message);

    ErrorCode code() const noexcept {
        return code_;
    }

   private:
    ErrorCode code_;
};

}  // namespace gptsim
