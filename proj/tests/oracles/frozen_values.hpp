// Generated by generate_oracles.py. Do not edit.
#ifndef OSPEP_TESTS_FROZEN_VALUES_HPP
#define OSPEP_TESTS_FROZEN_VALUES_HPP

#include <array>
#include <optional>

namespace oracle {

struct DrsPoint {
  double mu, p, theta;
  char branch;
  double rho;     // closed form, 40-digit evaluation
  double sdp_rho_sq;  // Clarabel on the literal tables
};

inline constexpr std::array<DrsPoint, 12> kMuCoco{{
    {1, 1, 1, 'e', 0.57735026918962576, 0.3333333333327535},
    {1, 1, 1.9, 'c', 0.89999999999999991, 0.8100000000047771},
    {0.2, 5, 0.5, 'd', 0.91666666666666666, 0.840277777789433},
    {5, 0.2, 0.5, 'a', 0.91666666666666666, 0.8402777778425178},
    {3, 4, 0.5, 'b', 0.675, 0.45562500001980266},
    {0.3, 0.4, 1.2, 'e', 0.73451493866493365, 0.5395121950853724},
    {10, 0.1, 1.5, 'a', 0.86363636363636363, 0.7458677686399261},
    {0.1, 10, 0.1, 'd', 0.99090909090909091, 0.9819008264462701},
    {2, 2, 1.99, 'c', 0.98999999999999999, 0.9801000001041289},
    {0.5, 3, 1.0, 'd', 0.66666666666666667, 0.4444444444061264},
    {4, 4, 0.3, 'b', 0.79600000000000001, 0.6336160000668087},
    {0.05, 0.7, 1.7, 'd', 0.91904761904761905, 0.8446485261006109},
}};

inline constexpr std::array<DrsPoint, 12> kMuLip{{
    {1, 1, 1, 'a', 0.80901699437494742, 0.6545084972230014},
    {0.5, 2, 0.7, 'a', 0.95935751413663903, 0.9203668399353229},
    {20, 0.3, 0.5, 'b', 0.6282051282051282, 0.3946416831570446},
    {5, 0.5, 1.2, 'a', 0.51231056256176604, 0.2624621129189497},
    {0.2, 0.2, 1.9, 'a', 0.90548256990105571, 0.8198986844010704},
    {3, 3, 0.1, 'a', 0.99275825678746517, 0.9855689564176651},
    {50, 0.1, 1.0, 'a', 0.10881387014132797, 0.011840458361388948},
    {1, 10, 1.5, 'a', 0.99702261109454155, 0.9940540870318113},
    {10, 1, 1.0, 'a', 0.72118494305993207, 0.5201077221300826},
    {3, 0.1, 1.0, 'b', 0.29545454545454546, 0.08729338843257767},
    {3, 0.5, 0.3, 'c', 0.82827584807426606, 0.6860408805023002},
    {2, 0.6, 0.2, 'a', 0.90395027332999473, 0.8171260966294231},
}};

struct Cls {
  std::optional<double> mu, beta, lip;
};

struct DysPoint {
  Cls a, b, c;
  double alpha, theta, sdp_rho_sq;
};

inline const std::array<DysPoint, 4> kDys{{
    {{.mu = 1}, {.beta = 0.01, .lip = 5}, {.beta = 9}, 0.13144, 1.64451, 0.7373993860690772},
    {{.mu = 1}, {.beta = 0.01, .lip = 5}, {.beta = 9}, 1.0, 1.0, 0.9559715900851267},
    {{.mu = 0.5, .lip = 2}, {.beta = 1}, {.beta = 2}, 0.7, 1.3, 0.4395198902489812},
    {{.mu = 1}, {.mu = 0, .lip = 3}, {.mu = 0.2, .beta = 0.5}, 0.4, 0.8, 0.8216393442675153},
}};

struct ReducedPoint {
  std::optional<Cls> a, b, c;  // nullopt: zero operator
  double alpha, theta, sdp_rho_sq;
};

inline const std::array<ReducedPoint, 4> kReduced{{
    {Cls{.mu = 1}, std::nullopt, Cls{.beta = 0.1}, 0.2, 1.0, 0.6944444446046126},
    {Cls{.mu = 1}, std::nullopt, Cls{.mu = 0.1, .beta = 2}, 1.5, 1.2, 0.08319999992118489},
    {std::nullopt, Cls{.mu = 1, .beta = 0.1}, Cls{.mu = 0, .lip = 8}, 0.015625, 1.0, 0.9846153846211362},
    {std::nullopt, Cls{.mu = 1}, Cls{.beta = 0.1}, 0.2, 1.0, 0.6944444444303921},
}};

}  // namespace oracle

#endif  // OSPEP_TESTS_FROZEN_VALUES_HPP
