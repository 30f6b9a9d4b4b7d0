#pragma once

// Generated by tests/oracles/derive_values.py; do not edit by hand.

namespace oracle {

inline constexpr double kEs300 = 3.6061306252508979308e+3;
inline constexpr double kEs250 = 9.7414840484132117023e+1;
inline constexpr double kQvs_80000_290 = 1.5412648773750548953e-2;
inline constexpr double kQvs_30000_300 = 5.0e-2;
inline constexpr double kExnerInv_50000 = 1.2191338872076590689;
inline constexpr double kQvsCapTemperature_80000 = 3.085668912263365872e+2;
inline constexpr double kLipschitzQvs_80000 = 3.0734384002674897912e-3;
inline constexpr double kRobinGhost = 1.1909090909090909091;
inline constexpr double kSev = 1.68e-7;
inline constexpr double kWeight_80000_280 = 9.766052762568442011;
inline constexpr double kBackwardEuler_level0_T = 2.8522446276102865464e+2;
inline constexpr double kBackwardEuler_level0_qv = 1.9909855755170892297e-2;
inline constexpr double kBackwardEuler_level0_qc = 1.0798036776929452898e-3;
inline constexpr double kBackwardEuler_level0_qr = 2.1034056713616241368e-4;
inline constexpr double kBackwardEuler_level1_T = 2.8703334374925543767e+2;
inline constexpr double kBackwardEuler_level1_qv = 1.9183409150299016231e-2;
inline constexpr double kBackwardEuler_level1_qc = 1.7957007927662843369e-3;
inline constexpr double kBackwardEuler_level1_qr = 2.2089005693469943245e-4;
inline constexpr double kDecayLiteralLhs = 6.4083048864141728655e-1;
inline constexpr double kDecayStepwiseLhs = 4.9230769230769230769e-1;
inline constexpr double kDecayRhs = 5.0e-1;

}  // namespace oracle
