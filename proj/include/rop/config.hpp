#pragma once

#include "rop/schedule.hpp"

#include <istream>
#include <string>

namespace rop {

// Schedule config: one `key = value` per line, `#` starts a comment.
// Rationals as num/den, arrays as comma lists, polynomial lists as
// `deg:value ...` groups separated by `;`. Keys:
//   base         th2 | th1 | hilbert (applied first, default th2)
//   variant      th2 | th1
//   space        lp | c0          p            rational
//   z            c0 | l2          epsilon      rational
//   alpha_kind   constant | hilbert            alpha  rational
//   kappa_step, n_max, grid_degree, net_budget_log2, budget_log2   integers
//   floors       five rationals   net_mode     grid | targeted
//   grid_eps     rational         net          polynomial list
//   step_net.<n> polynomial list  h_rule, k_rule  integer lists
//   rho          rational
// Unknown keys and malformed values throw ParseError.
ScheduleParams parse_schedule_config(std::istream& in);
ScheduleParams load_schedule_config(const std::string& path);

// Inverse of the parser; every field is written.
std::string format_schedule_config(const ScheduleParams& p);

}  // namespace rop
