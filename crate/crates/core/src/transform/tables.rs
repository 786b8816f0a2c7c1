// Generated by tools/gen_dct_tables.py. Do not edit.

use super::dct::Rotation;

pub(crate) const DCT4_2_SIGNS: [i8; 2] = [1, -1];
pub(crate) const DCT4_2_ROTATIONS: [Rotation; 1] = [
    Rotation::new(0, 1, false, 3259, 6270),
];

pub(crate) const DCT4_4_SIGNS: [i8; 4] = [1, 1, 1, 1];
pub(crate) const DCT4_4_ROTATIONS: [Rotation; 6] = [
    Rotation::new(2, 3, true, 12944, 15939),
    Rotation::new(1, 2, false, -9102, -13911),
    Rotation::new(1, 3, true, 11723, 15507),
    Rotation::new(0, 1, false, 5325, 9633),
    Rotation::new(0, 2, false, 4246, 7957),
    Rotation::new(0, 3, false, 1614, 3196),
];

pub(crate) const DCT4_8_SIGNS: [i8; 8] = [1, 1, 1, 1, 1, 1, 1, 1];
pub(crate) const DCT4_8_ROTATIONS: [Rotation; 28] = [
    Rotation::new(6, 7, true, 3475, 6651),
    Rotation::new(5, 6, false, 1042, 2075),
    Rotation::new(5, 7, true, 11956, 15603),
    Rotation::new(4, 5, false, -6817, -11622),
    Rotation::new(4, 6, false, -6100, -10715),
    Rotation::new(4, 7, false, -10847, -15083),
    Rotation::new(3, 4, false, 3160, 6093),
    Rotation::new(3, 5, false, 3022, 5846),
    Rotation::new(3, 6, false, -5287, -9577),
    Rotation::new(3, 7, true, -11380, -15353),
    Rotation::new(2, 3, false, -6266, -10933),
    Rotation::new(2, 4, false, -6537, -11279),
    Rotation::new(2, 5, false, -2544, -4969),
    Rotation::new(2, 6, false, 3131, 6041),
    Rotation::new(2, 7, true, -3494, -6684),
    Rotation::new(1, 2, false, 1295, 2573),
    Rotation::new(1, 3, false, -1157, -2303),
    Rotation::new(1, 4, false, -3840, -7280),
    Rotation::new(1, 5, false, -6372, -11069),
    Rotation::new(1, 6, false, -7767, -12684),
    Rotation::new(1, 7, false, -4071, -7669),
    Rotation::new(0, 1, false, 4174, 7839),
    Rotation::new(0, 2, false, 4412, 8228),
    Rotation::new(0, 3, false, 4482, 8339),
    Rotation::new(0, 4, false, 4242, 7951),
    Rotation::new(0, 5, false, 3536, 6757),
    Rotation::new(0, 6, false, 2330, 4567),
    Rotation::new(0, 7, false, 805, 1606),
];

pub(crate) const DCT4_16_SIGNS: [i8; 16] = [1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1];
pub(crate) const DCT4_16_ROTATIONS: [Rotation; 120] = [
    Rotation::new(14, 15, false, 9808, 14441),
    Rotation::new(13, 14, false, 8944, 13781),
    Rotation::new(13, 15, true, 6050, 10648),
    Rotation::new(12, 13, false, -3396, -6513),
    Rotation::new(12, 14, false, -7841, -12760),
    Rotation::new(12, 15, true, -6302, -10979),
    Rotation::new(11, 12, false, 524, 1046),
    Rotation::new(11, 13, false, -4959, -9086),
    Rotation::new(11, 14, false, -3484, -6667),
    Rotation::new(11, 15, false, 4725, 8724),
    Rotation::new(10, 11, false, -45, -89),
    Rotation::new(10, 12, false, 7128, 11987),
    Rotation::new(10, 13, false, -957, -1908),
    Rotation::new(10, 14, false, -7745, -12661),
    Rotation::new(10, 15, true, -11677, -15487),
    Rotation::new(9, 10, false, 2327, 4562),
    Rotation::new(9, 11, false, 1814, 3584),
    Rotation::new(9, 12, false, -1271, -2527),
    Rotation::new(9, 13, false, 1397, 2773),
    Rotation::new(9, 14, false, 2013, 3965),
    Rotation::new(9, 15, true, 9077, 13890),
    Rotation::new(8, 9, false, -4720, -8717),
    Rotation::new(8, 10, false, -3402, -6524),
    Rotation::new(8, 11, false, 5460, 9829),
    Rotation::new(8, 12, false, 8248, 13160),
    Rotation::new(8, 13, false, 3124, 6029),
    Rotation::new(8, 14, false, -484, -968),
    Rotation::new(8, 15, true, 15403, 16353),
    Rotation::new(7, 8, false, 991, 1975),
    Rotation::new(7, 9, false, 3354, 6439),
    Rotation::new(7, 10, false, 94, 188),
    Rotation::new(7, 11, false, -3423, -6559),
    Rotation::new(7, 12, false, -1445, -2868),
    Rotation::new(7, 13, false, 2913, 5648),
    Rotation::new(7, 14, false, 2454, 4800),
    Rotation::new(7, 15, true, -7687, -12600),
    Rotation::new(6, 7, false, -4073, -7671),
    Rotation::new(6, 8, false, -4701, -8687),
    Rotation::new(6, 9, false, -1228, -2442),
    Rotation::new(6, 10, false, 2689, 5236),
    Rotation::new(6, 11, false, 1661, 3289),
    Rotation::new(6, 12, false, -3516, -6722),
    Rotation::new(6, 13, false, -7309, -12192),
    Rotation::new(6, 14, false, 1524, 3021),
    Rotation::new(6, 15, false, 15500, 16359),
    Rotation::new(5, 6, false, 3311, 6362),
    Rotation::new(5, 7, false, 1081, 2152),
    Rotation::new(5, 8, false, -3465, -6634),
    Rotation::new(5, 9, false, -6635, -11400),
    Rotation::new(5, 10, false, -6250, -10912),
    Rotation::new(5, 11, false, -819, -1634),
    Rotation::new(5, 12, false, 5575, 9993),
    Rotation::new(5, 13, false, 6991, 11829),
    Rotation::new(5, 14, false, 3049, 5894),
    Rotation::new(5, 15, false, 990, 1973),
    Rotation::new(4, 5, false, -2955, -5723),
    Rotation::new(4, 6, false, -1009, -2011),
    Rotation::new(4, 7, false, 1351, 2683),
    Rotation::new(4, 8, false, 2211, 4342),
    Rotation::new(4, 9, false, 794, 1584),
    Rotation::new(4, 10, false, -1716, -3395),
    Rotation::new(4, 11, false, -4139, -7781),
    Rotation::new(4, 12, false, -4279, -8011),
    Rotation::new(4, 13, false, -841, -1677),
    Rotation::new(4, 14, false, 4158, 7814),
    Rotation::new(4, 15, true, 5349, 9667),
    Rotation::new(3, 4, false, -3912, -7402),
    Rotation::new(3, 5, false, -5007, -9158),
    Rotation::new(3, 6, false, -5293, -9586),
    Rotation::new(3, 7, false, -4105, -7725),
    Rotation::new(3, 8, false, -1117, -2223),
    Rotation::new(3, 9, false, 2450, 4792),
    Rotation::new(3, 10, false, 5061, 9240),
    Rotation::new(3, 11, false, 5638, 10082),
    Rotation::new(3, 12, false, 3856, 7307),
    Rotation::new(3, 13, false, 1066, 2122),
    Rotation::new(3, 14, false, -1471, -2918),
    Rotation::new(3, 15, true, 1733, 3428),
    Rotation::new(2, 3, false, 212, 423),
    Rotation::new(2, 4, false, -1292, -2567),
    Rotation::new(2, 5, false, -2756, -5360),
    Rotation::new(2, 6, false, -3971, -7501),
    Rotation::new(2, 7, false, -4810, -8856),
    Rotation::new(2, 8, false, -5085, -9277),
    Rotation::new(2, 9, false, -4449, -8286),
    Rotation::new(2, 10, false, -2689, -5238),
    Rotation::new(2, 11, false, -233, -467),
    Rotation::new(2, 12, false, 2436, 4766),
    Rotation::new(2, 13, false, 5426, 9779),
    Rotation::new(2, 14, false, 8246, 13159),
    Rotation::new(2, 15, false, 5153, 9378),
    Rotation::new(1, 2, false, 2767, 5381),
    Rotation::new(1, 3, false, 2598, 5069),
    Rotation::new(1, 4, false, 2173, 4271),
    Rotation::new(1, 5, false, 1495, 2966),
    Rotation::new(1, 6, false, 618, 1234),
    Rotation::new(1, 7, false, -377, -754),
    Rotation::new(1, 8, false, -1424, -2827),
    Rotation::new(1, 9, false, -2484, -4857),
    Rotation::new(1, 10, false, -3537, -6758),
    Rotation::new(1, 11, false, -4535, -8424),
    Rotation::new(1, 12, false, -5335, -9647),
    Rotation::new(1, 13, false, -5532, -9932),
    Rotation::new(1, 14, false, -4370, -8160),
    Rotation::new(1, 15, false, -1640, -3247),
    Rotation::new(0, 1, false, 2958, 5730),
    Rotation::new(0, 2, false, 3107, 5998),
    Rotation::new(0, 3, false, 3251, 6256),
    Rotation::new(0, 4, false, 3388, 6499),
    Rotation::new(0, 5, false, 3513, 6717),
    Rotation::new(0, 6, false, 3616, 6896),
    Rotation::new(0, 7, false, 3684, 7014),
    Rotation::new(0, 8, false, 3696, 7034),
    Rotation::new(0, 9, false, 3623, 6908),
    Rotation::new(0, 10, false, 3432, 6575),
    Rotation::new(0, 11, false, 3091, 5970),
    Rotation::new(0, 12, false, 2589, 5051),
    Rotation::new(0, 13, false, 1942, 3830),
    Rotation::new(0, 14, false, 1196, 2379),
    Rotation::new(0, 15, false, 402, 804),
];
