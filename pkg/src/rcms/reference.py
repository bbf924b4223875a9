"""Reference values checked by ``rcms verify`` and the test-suite."""

# number of m x m RC matrices with margin 4, m = 1..6
TOTAL_COUNTS = {1: 1, 2: 5, 3: 120, 4: 10147, 5: 2224955, 6: 1047649905}

# equivalence classes under row x column permutations
CLASS_COUNTS = {1: 1, 2: 3, 3: 9, 4: 43, 5: 264, 6: 2804}

# m = 2 Burnside fixed-point counts n(i, j), identity first
BURNSIDE_M2 = ((5, 1), (1, 5))

# representatives after each augmentation round at m = 5
STAGE_COUNTS_M5 = (5, 44, 314, 1021, 264)

# the nine order-3 representatives in non-canonical form, with class sizes, row-product
# factors and the weights of their expansions
M3_REPRESENTATIVES = (
    ((4, 0, 0), (0, 4, 0), (0, 0, 4)),
    ((4, 0, 0), (0, 3, 1), (0, 1, 3)),
    ((4, 0, 0), (0, 2, 2), (0, 2, 2)),
    ((3, 1, 0), (0, 1, 3), (1, 2, 1)),
    ((3, 1, 0), (0, 3, 1), (1, 0, 3)),
    ((3, 1, 0), (0, 2, 2), (1, 1, 2)),
    ((2, 2, 0), (0, 2, 2), (2, 0, 2)),
    ((2, 2, 0), (1, 1, 2), (1, 1, 2)),
    ((1, 2, 1), (2, 1, 1), (1, 1, 2)),
)
M3_ORBIT_SIZES = (6, 18, 9, 18, 12, 36, 6, 9, 6)
M3_FACTORS = (1, 16, 36, 192, 64, 288, 216, 864, 1728)
M3_EXPANSION_WEIGHTS = (
    (13824,),
    (13824,),
    (1536, 6144, 6144),
    (4608, 9216),
    (13824,),
    (1536, 3072, 3072, 6144),
    (512, 3072, 6144, 4096),
    (512, 1024, 2048, 4096, 2048, 4096),
    (512, 3072, 6144, 4096),
)

# (M_T, M_K, s) for every order-3 graph
M3_RECORDS = (
    (1244160, 27, 3072),
    (29859840, 648, 128),
    (9953280, 216, 384),
    (79626240, 1728, 48),
    (119439360, 2592, 32),
    (159252480, 3456, 24),
    (79626240, 1728, 48),
)

# the order-4 example matrix, its row-product factor and expansion weights
EXAMPLE_M4 = ((1, 1, 1, 1), (3, 1, 0, 0), (0, 2, 1, 1), (0, 0, 2, 2))
EXAMPLE_M4_FACTOR = 6912
EXAMPLE_M4_WEIGHTS = (12288, 24576, 73728, 49152, 24576, 49152, 98304)

# (M_T, M_K, s) for the connected order-4 graphs
M4_CONNECTED = (
    (642105999360, 62208, 128),
    (2568423997440, 248832, 32),
    (1712282664960, 165888, 48),
    (1712282664960, 165888, 48),
    (2568423997440, 248832, 32),
    (5136847994880, 497664, 16),
    (1284211998720, 124416, 64),
    (570760888320, 55296, 144),
    (642105999360, 62208, 128),
    (2568423997440, 248832, 32),
)

# (M_T, M_K, s) for the connected order-5 graphs
M5_CONNECTED = (
    (27738979172352000, 7464960, 128),
    (110955916689408000, 29859840, 32),
    (221911833378816000, 59719680, 16),
    (221911833378816000, 59719680, 16),
    (11095591668940800, 2985984, 320),
    (110955916689408000, 29859840, 32),
    (221911833378816000, 59719680, 16),
    (29588244450508800, 7962624, 120),
    (55477958344704000, 14929920, 64),
    (36985305563136000, 9953280, 96),
    (55477958344704000, 14929920, 64),
    (55477958344704000, 14929920, 64),
    (73970611126272000, 19906560, 48),
    (110955916689408000, 29859840, 32),
    (27738979172352000, 7464960, 128),
    (36985305563136000, 9953280, 96),
    (11095591668940800, 2985984, 320),
    (36985305563136000, 9953280, 96),
    (110955916689408000, 29859840, 32),
    (110955916689408000, 29859840, 32),
    (73970611126272000, 19906560, 48),
    (24656870375424000, 6635520, 144),
    (12328435187712000, 3317760, 288),
    (73970611126272000, 19906560, 48),
    (110955916689408000, 29859840, 32),
    (36985305563136000, 9953280, 96),
    (55477958344704000, 14929920, 64),
    (221911833378816000, 59719680, 16),
)

# distinct graphs (all / connected) per order
GRAPH_COUNTS = {3: 7, 5: 56, 6: 187}
CONNECTED_COUNTS = {4: 10, 5: 28, 6: 97}

# engine-derived regression values without an independent source
REGRESSION_GRAPH_COUNTS = {1: 1, 2: 3, 4: 20}

# Birkhoff examples
DIAG3 = ((4, 0, 0), (0, 4, 0), (0, 0, 4))
TWO_DECOMPOSITIONS = ((1, 2, 1), (2, 1, 1), (1, 1, 2))
UNIQUE_A = ((2, 1, 1, 0), (0, 0, 2, 2), (0, 2, 0, 2), (2, 1, 1, 0))
UNIQUE_B = ((2, 1, 1, 0), (0, 1, 1, 2), (0, 2, 2, 0), (2, 0, 0, 2))
