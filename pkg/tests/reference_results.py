"""Reference benchmark numbers used as fixtures.

Mean accuracies and bracketed per-dataset ranks for
PE, PA, PATER-I, PATER-II, wPATER-I, wPATER-II on 31 datasets.
"""

ALGORITHMS = ("perceptron", "pa", "pater1", "pater2", "wpater1", "wpater2")

# (dataset, mean accuracies, ranks)
TABLE = [
    ('Monks-3', [70.902, 71.066, 75.574, 75.738, 75.984, 77.295], [6, 5, 4, 3, 2, 1]),
    ('Monks-1', [64.355, 64.355, 64.919, 67.177, 67.097, 69.919], [5, 6, 4, 2, 3, 1]),
    ('Monks-2', [54.195, 52.426, 49.235, 50.049, 61.72, 62.132], [3, 4, 6, 5, 2, 1]),
    ('Wpbc', [67.835, 65.67, 59.021, 55.309, 72.113, 69.278], [3, 4, 5, 6, 1, 2]),
    ('Parkinsons', [76.563, 78.15, 67.586, 66.408, 82.618, 74.822], [3, 2, 5, 6, 1, 4]),
    ('Sonar', [69.904, 72.067, 72.788, 69.615, 74.471, 72.115], [5, 4, 2, 6, 1, 3]),
    ('SPECTF-heart', [72.361, 72.473, 55.58, 53.633, 76.405, 70.447], [3, 2, 5, 6, 1, 4]),
    ('Statlog-heart', [78.667, 77.667, 81.0, 82.815, 82.111, 84.037], [5, 6, 4, 2, 3, 1]),
    ('BUPA-liver', [58.233, 57.769, 59.535, 54.463, 61.161, 58.55], [4, 5, 2, 6, 1, 3]),
    ('Ionosphere', [80.573, 84.302, 81.711, 73.478, 85.128, 81.367], [5, 2, 3, 6, 1, 4]),
    ('Votes', [90.481, 91.605, 90.369, 87.999, 92.368, 88.644], [3, 2, 4, 6, 1, 5]),
    ('Musk-clearn-1', [70.399, 70.546, 74.958, 62.836, 75.546, 63.592], [4, 3, 2, 6, 1, 5]),
    ('Wdbc', [94.728, 95.518, 96.01, 93.145, 96.116, 93.479], [4, 3, 2, 6, 1, 5]),
    ('Credit-app', [80.503, 81.682, 84.349, 85.284, 84.441, 85.376], [6, 5, 4, 2, 3, 1]),
    ('Breast-cancer-W', [95.623, 95.491, 96.969, 96.881, 97.115, 97.438], [5, 6, 3, 4, 2, 1]),
    ('Statlog-australian', [78.841, 79.493, 84.217, 85.507, 84.29, 85.58], [6, 5, 4, 2, 3, 1]),
    ('Blood-transfusion', [68.436, 66.444, 59.024, 62.794, 76.377, 76.912], [3, 4, 6, 5, 2, 1]),
    ('Pima-diabetes', [68.099, 69.505, 66.797, 72.057, 70.208, 74.74], [5, 4, 6, 2, 3, 1]),
    ('Mammographic', [70.482, 72.241, 76.494, 81.349, 78.012, 81.602], [6, 5, 4, 2, 3, 1]),
    ('Tic-tac-toe', [55.929, 56.013, 52.453, 56.983, 65.376, 67.056], [5, 4, 6, 3, 2, 1]),
    ('Statlog-german', [68.47, 66.41, 63.12, 68.63, 71.91, 75.63], [4, 5, 6, 3, 2, 1]),
    ('Ozone-eight', [89.924, 90.921, 52.528, 53.059, 92.534, 67.845], [3, 2, 6, 5, 1, 4]),
    ('Ozone-one', [92.516, 95.07, 50.168, 49.8, 96.374, 79.015], [3, 2, 5, 6, 1, 4]),
    ('20News-talk', [49.957, 49.854, 49.811, 50.06, 51.292, 50.838], [4, 5, 6, 3, 1, 2]),
    ('20News-comp', [54.544, 53.376, 58.839, 57.495, 63.676, 59.172], [5, 6, 3, 4, 1, 2]),
    ('20News-sci', [72.572, 69.98, 73.31, 65.591, 74.42, 74.425], [4, 5, 3, 6, 2, 1]),
    ('Spambase', [87.142, 86.707, 89.961, 89.048, 90.915, 89.641], [5, 6, 2, 4, 1, 3]),
    ('Mushroom', [91.357, 93.698, 93.82, 87.509, 94.341, 88.521], [4, 3, 2, 6, 1, 5]),
    ('Cod-rna', [90.59, 90.669, 87.965, 69.606, 89.42, 77.571], [2, 1, 4, 6, 3, 5]),
    ('Ijcnn1', [89.655, 90.342, 59.43, 65.847, 92.029, 90.426], [4, 3, 6, 5, 1, 2]),
    ('Skin-nonskin', [88.917, 91.104, 89.302, 66.539, 88.209, 87.725], [3, 1, 2, 6, 4, 5]),
]

REFERENCE_AVERAGE_RANKS = {"perceptron": 4.19, "pa": 3.87, "pater1": 4.06, "pater2": 4.52, "wpater1": 1.77, "wpater2": 2.58}
