#include "dtagraph/protein_features.hpp"

namespace dtagraph::protein {

// Rows and columns follow the ACDEFGHIKLMNPQRSTVWY alphabet. Entry [a][b] is the
// distance used for the ordered residue pair (a at position i, b at i + lag).

const DistanceMatrix kSchneiderWredeDistance = {{
    {0.000, 0.112, 0.819, 0.827, 0.540, 0.208, 0.696, 0.407, 0.891, 0.406, 0.379, 0.318, 0.191, 0.372, 1.000, 0.094, 0.220, 0.273, 0.739, 0.552},  // A
    {0.114, 0.000, 0.847, 0.838, 0.437, 0.320, 0.660, 0.304, 0.887, 0.301, 0.277, 0.324, 0.157, 0.341, 1.000, 0.176, 0.233, 0.167, 0.639, 0.457},  // C
    {0.729, 0.742, 0.000, 0.124, 0.924, 0.697, 0.435, 0.847, 0.249, 0.841, 0.819, 0.560, 0.657, 0.584, 0.295, 0.667, 0.649, 0.797, 1.000, 0.836},  // D
    {0.790, 0.788, 0.133, 0.000, 0.932, 0.779, 0.406, 0.860, 0.143, 0.854, 0.830, 0.599, 0.688, 0.598, 0.234, 0.726, 0.682, 0.824, 1.000, 0.837},  // E
    {0.508, 0.405, 0.977, 0.918, 0.000, 0.690, 0.663, 0.128, 0.903, 0.131, 0.169, 0.541, 0.420, 0.459, 1.000, 0.548, 0.499, 0.252, 0.207, 0.179},  // F
    {0.206, 0.312, 0.776, 0.807, 0.727, 0.000, 0.769, 0.592, 0.894, 0.591, 0.557, 0.381, 0.323, 0.467, 1.000, 0.158, 0.272, 0.464, 0.923, 0.728},  // G
    {0.896, 0.836, 0.629, 0.547, 0.907, 1.000, 0.000, 0.848, 0.566, 0.842, 0.825, 0.754, 0.777, 0.716, 0.697, 0.865, 0.834, 0.831, 0.981, 0.821},  // H
    {0.403, 0.296, 0.942, 0.891, 0.134, 0.592, 0.652, 0.000, 0.892, 0.013, 0.057, 0.457, 0.311, 0.383, 1.000, 0.443, 0.396, 0.133, 0.339, 0.213},  // I
    {0.889, 0.871, 0.279, 0.149, 0.957, 0.900, 0.438, 0.899, 0.000, 0.892, 0.871, 0.667, 0.757, 0.639, 0.154, 0.825, 0.759, 0.882, 1.000, 0.848},  // K
    {0.405, 0.296, 0.944, 0.892, 0.139, 0.596, 0.653, 0.013, 0.893, 0.000, 0.062, 0.452, 0.309, 0.376, 1.000, 0.443, 0.397, 0.133, 0.341, 0.205},  // L
    {0.383, 0.276, 0.932, 0.879, 0.182, 0.569, 0.648, 0.058, 0.884, 0.062, 0.000, 0.447, 0.285, 0.372, 1.000, 0.417, 0.358, 0.120, 0.391, 0.255},  // M
    {0.424, 0.425, 0.838, 0.835, 0.766, 0.512, 0.780, 0.615, 0.891, 0.603, 0.588, 0.000, 0.266, 0.175, 1.000, 0.361, 0.368, 0.503, 0.945, 0.641},  // N
    {0.220, 0.179, 0.852, 0.831, 0.515, 0.376, 0.696, 0.363, 0.875, 0.357, 0.326, 0.231, 0.000, 0.228, 1.000, 0.196, 0.161, 0.244, 0.720, 0.481},  // P
    {0.512, 0.462, 0.903, 0.861, 0.671, 0.648, 0.765, 0.532, 0.881, 0.518, 0.505, 0.181, 0.272, 0.000, 1.000, 0.461, 0.389, 0.464, 0.831, 0.522},  // Q
    {0.919, 0.905, 0.305, 0.225, 0.977, 0.928, 0.498, 0.929, 0.141, 0.920, 0.908, 0.690, 0.796, 0.668, 0.000, 0.860, 0.808, 0.914, 1.000, 0.859},  // R
    {0.100, 0.185, 0.801, 0.812, 0.622, 0.170, 0.718, 0.478, 0.883, 0.474, 0.440, 0.289, 0.181, 0.358, 1.000, 0.000, 0.174, 0.342, 0.827, 0.615},  // S
    {0.251, 0.261, 0.830, 0.812, 0.604, 0.312, 0.737, 0.455, 0.866, 0.453, 0.403, 0.315, 0.159, 0.322, 1.000, 0.185, 0.000, 0.345, 0.816, 0.596},  // T
    {0.275, 0.165, 0.900, 0.867, 0.269, 0.471, 0.649, 0.135, 0.889, 0.134, 0.120, 0.380, 0.212, 0.339, 1.000, 0.322, 0.305, 0.000, 0.472, 0.310},  // V
    {0.658, 0.560, 1.000, 0.931, 0.196, 0.829, 0.678, 0.305, 0.892, 0.304, 0.344, 0.631, 0.555, 0.538, 0.968, 0.689, 0.638, 0.418, 0.000, 0.204},  // W
    {0.587, 0.478, 1.000, 0.932, 0.202, 0.782, 0.678, 0.230, 0.904, 0.219, 0.268, 0.512, 0.444, 0.404, 0.995, 0.612, 0.557, 0.328, 0.244, 0.000},  // Y
}};

const DistanceMatrix kGranthamDistance = {{
    {0.0, 195.0, 126.0, 107.0, 113.0, 60.0, 86.0, 94.0, 106.0, 96.0, 84.0, 111.0, 27.0, 91.0, 112.0, 99.0, 58.0, 64.0, 148.0, 112.0},  // A
    {195.0, 0.0, 154.0, 170.0, 205.0, 159.0, 174.0, 198.0, 202.0, 198.0, 196.0, 139.0, 169.0, 154.0, 180.0, 112.0, 149.0, 192.0, 215.0, 194.0},  // C
    {126.0, 154.0, 0.0, 45.0, 177.0, 94.0, 81.0, 168.0, 101.0, 172.0, 160.0, 23.0, 108.0, 61.0, 96.0, 65.0, 85.0, 152.0, 181.0, 160.0},  // D
    {107.0, 170.0, 45.0, 0.0, 140.0, 98.0, 40.0, 134.0, 56.0, 138.0, 126.0, 42.0, 93.0, 29.0, 54.0, 80.0, 65.0, 121.0, 152.0, 122.0},  // E
    {113.0, 205.0, 177.0, 140.0, 0.0, 153.0, 100.0, 21.0, 102.0, 22.0, 28.0, 158.0, 114.0, 116.0, 97.0, 155.0, 103.0, 50.0, 40.0, 22.0},  // F
    {60.0, 159.0, 94.0, 98.0, 153.0, 0.0, 98.0, 135.0, 127.0, 138.0, 127.0, 80.0, 42.0, 87.0, 125.0, 56.0, 59.0, 109.0, 184.0, 147.0},  // G
    {86.0, 174.0, 81.0, 40.0, 100.0, 98.0, 0.0, 94.0, 32.0, 99.0, 87.0, 68.0, 77.0, 24.0, 29.0, 89.0, 47.0, 84.0, 115.0, 83.0},  // H
    {94.0, 198.0, 168.0, 134.0, 21.0, 135.0, 94.0, 0.0, 102.0, 5.0, 10.0, 149.0, 95.0, 109.0, 97.0, 142.0, 89.0, 29.0, 61.0, 33.0},  // I
    {106.0, 202.0, 101.0, 56.0, 102.0, 127.0, 32.0, 102.0, 0.0, 107.0, 95.0, 94.0, 103.0, 53.0, 26.0, 121.0, 78.0, 97.0, 110.0, 85.0},  // K
    {96.0, 198.0, 172.0, 138.0, 22.0, 138.0, 99.0, 5.0, 107.0, 0.0, 15.0, 153.0, 98.0, 113.0, 102.0, 145.0, 92.0, 32.0, 61.0, 36.0},  // L
    {84.0, 196.0, 160.0, 126.0, 28.0, 127.0, 87.0, 10.0, 95.0, 15.0, 0.0, 142.0, 87.0, 101.0, 91.0, 135.0, 81.0, 21.0, 67.0, 36.0},  // M
    {111.0, 139.0, 23.0, 42.0, 158.0, 80.0, 68.0, 149.0, 94.0, 153.0, 142.0, 0.0, 91.0, 46.0, 86.0, 46.0, 65.0, 133.0, 174.0, 143.0},  // N
    {27.0, 169.0, 108.0, 93.0, 114.0, 42.0, 77.0, 95.0, 103.0, 98.0, 87.0, 91.0, 0.0, 76.0, 103.0, 74.0, 38.0, 68.0, 147.0, 110.0},  // P
    {91.0, 154.0, 61.0, 29.0, 116.0, 87.0, 24.0, 109.0, 53.0, 113.0, 101.0, 46.0, 76.0, 0.0, 43.0, 68.0, 42.0, 96.0, 130.0, 99.0},  // Q
    {112.0, 180.0, 96.0, 54.0, 97.0, 125.0, 29.0, 97.0, 26.0, 102.0, 91.0, 86.0, 103.0, 43.0, 0.0, 110.0, 71.0, 96.0, 101.0, 77.0},  // R
    {99.0, 112.0, 65.0, 80.0, 155.0, 56.0, 89.0, 142.0, 121.0, 145.0, 135.0, 46.0, 74.0, 68.0, 110.0, 0.0, 58.0, 124.0, 177.0, 144.0},  // S
    {58.0, 149.0, 85.0, 65.0, 103.0, 59.0, 47.0, 89.0, 78.0, 92.0, 81.0, 65.0, 38.0, 42.0, 71.0, 58.0, 0.0, 69.0, 128.0, 92.0},  // T
    {64.0, 192.0, 152.0, 121.0, 50.0, 109.0, 84.0, 29.0, 97.0, 32.0, 21.0, 133.0, 68.0, 96.0, 96.0, 124.0, 69.0, 0.0, 88.0, 55.0},  // V
    {148.0, 215.0, 181.0, 152.0, 40.0, 184.0, 115.0, 61.0, 110.0, 61.0, 67.0, 174.0, 147.0, 130.0, 101.0, 177.0, 128.0, 88.0, 0.0, 37.0},  // W
    {112.0, 194.0, 160.0, 122.0, 22.0, 147.0, 83.0, 33.0, 85.0, 36.0, 36.0, 143.0, 110.0, 99.0, 77.0, 144.0, 92.0, 55.0, 37.0, 0.0},  // Y
}};

}  // namespace dtagraph::protein
