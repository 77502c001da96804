//! Residual tables reported for the five built-in experiments.
//!
//! Each column is one `(experiment, orders, J)` cell: `r` at
//! `x = 0.1, …, 0.9` and the maximum `e` over those nine points.

#[derive(Debug, Clone, Copy)]
pub struct ReferenceColumn {
    /// 1-based table number.
    pub table: usize,
    pub experiment: &'static str,
    /// Index into the experiment's four order tuples.
    pub tuple: usize,
    pub orders: [f64; 4],
    pub level: u32,
    pub r: [f64; 9],
    pub e: f64,
}

pub const REFERENCE_COLUMNS: [ReferenceColumn; 60] = [
    ReferenceColumn {
        table: 1,
        experiment: "5.1",
        tuple: 0,
        orders: [1.58, 0.58, 1.59, 0.59],
        level: 3,
        r: [
            0.014275, 0.036819, 0.040516, 0.009009, 0.03011, 0.00502, 0.00988, 0.007947, 0.001757,
        ],
        e: 0.040516,
    },
    ReferenceColumn {
        table: 1,
        experiment: "5.1",
        tuple: 0,
        orders: [1.58, 0.58, 1.59, 0.59],
        level: 4,
        r: [
            0.017655, 0.007014, 0.006223, 0.01477, 0.0162, 0.007184, 0.001749, 0.001272, 0.002774,
        ],
        e: 0.017655,
    },
    ReferenceColumn {
        table: 1,
        experiment: "5.1",
        tuple: 0,
        orders: [1.58, 0.58, 1.59, 0.59],
        level: 5,
        r: [
            0.003259, 0.011174, 0.008958, 0.002377, 0.008383, 0.001235, 0.0027, 0.001869, 0.000453,
        ],
        e: 0.011174,
    },
    ReferenceColumn {
        table: 1,
        experiment: "5.1",
        tuple: 1,
        orders: [1.7, 0.7, 1.71, 0.71],
        level: 3,
        r: [
            0.011851, 0.035923, 0.043111, 0.010576, 0.037501, 0.006438, 0.013008, 0.01056, 0.002385,
        ],
        e: 0.043111,
    },
    ReferenceColumn {
        table: 1,
        experiment: "5.1",
        tuple: 1,
        orders: [1.7, 0.7, 1.71, 0.71],
        level: 4,
        r: [
            0.014496, 0.006708, 0.006658, 0.017144, 0.020049, 0.009211, 0.002292, 0.001693,
            0.003745,
        ],
        e: 0.020049,
    },
    ReferenceColumn {
        table: 1,
        experiment: "5.1",
        tuple: 1,
        orders: [1.7, 0.7, 1.71, 0.71],
        level: 5,
        r: [
            0.002643, 0.010599, 0.009608, 0.002765, 0.010349, 0.001581, 0.003531, 0.002488,
            0.000613,
        ],
        e: 0.010599,
    },
    ReferenceColumn {
        table: 2,
        experiment: "5.1",
        tuple: 2,
        orders: [1.85, 0.85, 1.86, 0.86],
        level: 3,
        r: [
            0.008864263,
            0.032358591,
            0.043279505,
            0.012065981,
            0.04676703,
            0.008456794,
            0.017902254,
            0.014882517,
            0.003458445,
        ],
        e: 0.04676703,
    },
    ReferenceColumn {
        table: 2,
        experiment: "5.1",
        tuple: 2,
        orders: [1.85, 0.85, 1.86, 0.86],
        level: 4,
        r: [
            0.010780913,
            0.005923749,
            0.006730453,
            0.019315675,
            0.024823853,
            0.012105698,
            0.00313974,
            0.002386259,
            0.005406854,
        ],
        e: 0.024823853,
    },
    ReferenceColumn {
        table: 2,
        experiment: "5.1",
        tuple: 2,
        orders: [1.85, 0.85, 1.86, 0.86],
        level: 5,
        r: [
            0.001941089,
            0.009281468,
            0.009744434,
            0.003124156,
            0.012775002,
            0.002072213,
            0.004827635,
            0.003508788,
            0.00088531,
        ],
        e: 0.012775002,
    },
    ReferenceColumn {
        table: 2,
        experiment: "5.1",
        tuple: 3,
        orders: [1.98, 0.98, 1.99, 0.99],
        level: 3,
        r: [
            0.006640035,
            0.028024954,
            0.040923062,
            0.01270759,
            0.053577266,
            0.010221575,
            0.022770754,
            0.019482779,
            0.004644217,
        ],
        e: 0.053577266,
    },
    ReferenceColumn {
        table: 2,
        experiment: "5.1",
        tuple: 3,
        orders: [1.98, 0.98, 1.99, 0.99],
        level: 4,
        r: [
            0.008068393,
            0.005060426,
            0.006402001,
            0.02015193,
            0.028270966,
            0.014652558,
            0.003978818,
            0.003124543,
            0.007244466,
        ],
        e: 0.028270966,
    },
    ReferenceColumn {
        table: 2,
        experiment: "5.1",
        tuple: 3,
        orders: [1.98, 0.98, 1.99, 0.99],
        level: 5,
        r: [
            0.001439572,
            0.007881939,
            0.009295701,
            0.003268217,
            0.014510215,
            0.002502738,
            0.006107856,
            0.004595591,
            0.001186479,
        ],
        e: 0.014510215,
    },
    ReferenceColumn {
        table: 3,
        experiment: "5.2",
        tuple: 0,
        orders: [1.56, 0.56, 1.57, 0.57],
        level: 3,
        r: [
            0.095166285,
            0.213666169,
            0.253668907,
            0.052158857,
            0.165401489,
            0.029378282,
            0.056321995,
            0.048256772,
            0.010589804,
        ],
        e: 0.253668907,
    },
    ReferenceColumn {
        table: 3,
        experiment: "5.2",
        tuple: 0,
        orders: [1.56, 0.56, 1.57, 0.57],
        level: 4,
        r: [
            0.10985955,
            0.043545515,
            0.037772527,
            0.088335812,
            0.091864603,
            0.041222003,
            0.010212269,
            0.007600155,
            0.017058372,
        ],
        e: 0.10985955,
    },
    ReferenceColumn {
        table: 3,
        experiment: "5.2",
        tuple: 0,
        orders: [1.56, 0.56, 1.57, 0.57],
        level: 5,
        r: [
            0.021471377,
            0.071255702,
            0.053429333,
            0.014027915,
            0.048201974,
            0.007173726,
            0.015931865,
            0.01107051,
            0.002765188,
        ],
        e: 0.071255702,
    },
    ReferenceColumn {
        table: 3,
        experiment: "5.2",
        tuple: 1,
        orders: [1.72, 0.72, 1.73, 0.73],
        level: 3,
        r: [
            0.070498547,
            0.194707716,
            0.25925813,
            0.060996731,
            0.208807915,
            0.038215848,
            0.074620523,
            0.063305242,
            0.013556134,
        ],
        e: 0.25925813,
    },
    ReferenceColumn {
        table: 3,
        experiment: "5.2",
        tuple: 1,
        orders: [1.72, 0.72, 1.73, 0.73],
        level: 4,
        r: [
            0.078189757,
            0.038333606,
            0.038851241,
            0.101456171,
            0.114805432,
            0.053589371,
            0.013467348,
            0.009962144,
            0.021839492,
        ],
        e: 0.114805432,
    },
    ReferenceColumn {
        table: 3,
        experiment: "5.2",
        tuple: 1,
        orders: [1.72, 0.72, 1.73, 0.73],
        level: 5,
        r: [
            0.014967547,
            0.061910197,
            0.055135781,
            0.016160048,
            0.0600067,
            0.009299162,
            0.020971629,
            0.014498798,
            0.003536987,
        ],
        e: 0.061910197,
    },
    ReferenceColumn {
        table: 4,
        experiment: "5.2",
        tuple: 2,
        orders: [1.83, 0.83, 1.84, 0.84],
        level: 3,
        r: [
            0.050311181,
            0.160152291,
            0.233192417,
            0.061345757,
            0.227914316,
            0.043713233,
            0.08937878,
            0.077366021,
            0.016838413,
        ],
        e: 0.233192417,
    },
    ReferenceColumn {
        table: 4,
        experiment: "5.2",
        tuple: 2,
        orders: [1.83, 0.83, 1.84, 0.84],
        level: 4,
        r: [
            0.054944919,
            0.030928128,
            0.035122382,
            0.100767373,
            0.124284553,
            0.061346376,
            0.016042336,
            0.012177103,
            0.027052393,
        ],
        e: 0.124284553,
    },
    ReferenceColumn {
        table: 4,
        experiment: "5.2",
        tuple: 2,
        orders: [1.83, 0.83, 1.84, 0.84],
        level: 5,
        r: [
            0.010402485,
            0.049577862,
            0.049976443,
            0.016092423,
            0.064743762,
            0.010615007,
            0.024925141,
            0.017726251,
            0.004381459,
        ],
        e: 0.064743762,
    },
    ReferenceColumn {
        table: 4,
        experiment: "5.2",
        tuple: 3,
        orders: [1.99, 0.98, 1.98, 0.99],
        level: 3,
        r: [
            0.02412831,
            0.101558767,
            0.166824304,
            0.051302867,
            0.21816228,
            0.045695843,
            0.103559247,
            0.095314179,
            0.022312941,
        ],
        e: 0.21816228,
    },
    ReferenceColumn {
        table: 4,
        experiment: "5.2",
        tuple: 3,
        orders: [1.99, 0.98, 1.98, 0.99],
        level: 4,
        r: [
            0.029017974,
            0.019277344,
            0.025320481,
            0.0830128,
            0.117597412,
            0.06440292,
            0.018403497,
            0.015048309,
            0.035555332,
        ],
        e: 0.117597412,
    },
    ReferenceColumn {
        table: 4,
        experiment: "5.2",
        tuple: 3,
        orders: [1.99, 0.98, 1.98, 0.99],
        level: 5,
        r: [
            0.005490234,
            0.030691359,
            0.036177022,
            0.013314,
            0.060947534,
            0.011090827,
            0.02846982,
            0.021950448,
            0.00576867,
        ],
        e: 0.060947534,
    },
    ReferenceColumn {
        table: 5,
        experiment: "5.3",
        tuple: 0,
        orders: [1.56, 0.58, 1.58, 0.56],
        level: 3,
        r: [
            0.026235012,
            0.007761867,
            0.002005921,
            0.000578982,
            0.003076936,
            0.000580388,
            0.001321078,
            0.001047245,
            0.000275617,
        ],
        e: 0.026235012,
    },
    ReferenceColumn {
        table: 5,
        experiment: "5.3",
        tuple: 0,
        orders: [1.56, 0.58, 1.58, 0.56],
        level: 4,
        r: [
            0.017523825,
            0.000662974,
            0.00046189,
            0.00155299,
            0.002218475,
            0.001088187,
            0.000271561,
            0.000178229,
            0.000359438,
        ],
        e: 0.017523825,
    },
    ReferenceColumn {
        table: 5,
        experiment: "5.3",
        tuple: 0,
        orders: [1.56, 0.58, 1.58, 0.56],
        level: 5,
        r: [
            0.001837204,
            0.000958718,
            0.001101721,
            0.00033711,
            0.001357433,
            0.000212686,
            0.000462196,
            0.000268582,
            5.13499e-05,
        ],
        e: 0.001837204,
    },
    ReferenceColumn {
        table: 5,
        experiment: "5.3",
        tuple: 1,
        orders: [1.69, 0.71, 1.71, 0.7],
        level: 3,
        r: [
            0.020560805,
            0.004963069,
            0.001194831,
            0.000610977,
            0.003114194,
            0.000592025,
            0.001427184,
            0.001231008,
            0.000328971,
        ],
        e: 0.020560805,
    },
    ReferenceColumn {
        table: 5,
        experiment: "5.3",
        tuple: 1,
        orders: [1.69, 0.71, 1.71, 0.7],
        level: 4,
        r: [
            0.013195631,
            0.000467463,
            0.000476804,
            0.001488191,
            0.00209396,
            0.001047831,
            0.000277028,
            0.00020884,
            0.000471681,
        ],
        e: 0.013195631,
    },
    ReferenceColumn {
        table: 5,
        experiment: "5.3",
        tuple: 1,
        orders: [1.69, 0.71, 1.71, 0.7],
        level: 5,
        r: [
            0.001319613,
            0.001082679,
            0.00106586,
            0.000311411,
            0.001249682,
            0.00020001,
            0.00045972,
            0.000316828,
            7.2731e-05,
        ],
        e: 0.001319613,
    },
    ReferenceColumn {
        table: 6,
        experiment: "5.3",
        tuple: 2,
        orders: [1.84, 0.85, 1.85, 0.86],
        level: 3,
        r: [
            0.01428091,
            0.003015328,
            0.000606883,
            0.000417036,
            0.002150104,
            0.000416085,
            0.001047845,
            0.000943306,
            0.000261158,
        ],
        e: 0.01428091,
    },
    ReferenceColumn {
        table: 6,
        experiment: "5.3",
        tuple: 2,
        orders: [1.84, 0.85, 1.85, 0.86],
        level: 4,
        r: [
            0.009766053,
            0.00030787,
            0.000299479,
            0.000949359,
            0.001364235,
            0.000703256,
            0.000194978,
            0.000158549,
            0.000386741,
        ],
        e: 0.009766053,
    },
    ReferenceColumn {
        table: 6,
        experiment: "5.3",
        tuple: 2,
        orders: [1.84, 0.85, 1.85, 0.86],
        level: 5,
        r: [
            0.001053608,
            0.000723941,
            0.000680265,
            0.000197701,
            0.000803253,
            0.000131988,
            0.000317806,
            0.000240382,
            6.15837e-05,
        ],
        e: 0.001053608,
    },
    ReferenceColumn {
        table: 6,
        experiment: "5.3",
        tuple: 3,
        orders: [1.98, 0.99, 1.99, 0.98],
        level: 3,
        r: [
            0.000947617,
            0.00026836,
            0.000160331,
            3.55083e-05,
            0.00012394,
            2.03894e-05,
            4.76727e-05,
            4.59488e-05,
            1.58286e-05,
        ],
        e: 0.000947617,
    },
    ReferenceColumn {
        table: 6,
        experiment: "5.3",
        tuple: 3,
        orders: [1.98, 0.99, 1.99, 0.98],
        level: 4,
        r: [
            0.000840957,
            4.02341e-05,
            2.43722e-05,
            5.55019e-05,
            6.32511e-05,
            2.8432e-05,
            7.67584e-06,
            7.21583e-06,
            2.32056e-05,
        ],
        e: 0.000840957,
    },
    ReferenceColumn {
        table: 6,
        experiment: "5.3",
        tuple: 3,
        orders: [1.98, 0.99, 1.99, 0.98],
        level: 5,
        r: [
            0.000118814,
            4.8115e-05,
            3.60821e-05,
            9.13333e-06,
            3.15239e-05,
            4.5303e-06,
            1.06179e-05,
            9.97976e-06,
            3.73574e-06,
        ],
        e: 0.000118814,
    },
    ReferenceColumn {
        table: 7,
        experiment: "5.4",
        tuple: 0,
        orders: [1.61, 0.62, 1.62, 0.63],
        level: 3,
        r: [
            0.001474905,
            0.006086186,
            0.009008915,
            0.003667475,
            0.022361501,
            0.005773812,
            0.021218404,
            0.026592868,
            0.011047904,
        ],
        e: 0.026592868,
    },
    ReferenceColumn {
        table: 7,
        experiment: "5.4",
        tuple: 0,
        orders: [1.61, 0.62, 1.62, 0.63],
        level: 4,
        r: [
            0.002069507,
            0.001069493,
            0.001450093,
            0.005595642,
            0.0113456,
            0.008548045,
            0.003549778,
            0.004415682,
            0.016519758,
        ],
        e: 0.016519758,
    },
    ReferenceColumn {
        table: 7,
        experiment: "5.4",
        tuple: 0,
        orders: [1.61, 0.62, 1.62, 0.63],
        level: 5,
        r: [
            0.000369637,
            0.001645428,
            0.002134283,
            0.000921766,
            0.00571595,
            0.00143098,
            0.005335927,
            0.006607277,
            0.002752051,
        ],
        e: 0.006607277,
    },
    ReferenceColumn {
        table: 7,
        experiment: "5.4",
        tuple: 1,
        orders: [1.74, 0.74, 1.75, 0.75],
        level: 3,
        r: [
            0.00113114,
            0.005167669,
            0.007975925,
            0.003368588,
            0.020981659,
            0.005431841,
            0.020059513,
            0.025115179,
            0.010394459,
        ],
        e: 0.025115179,
    },
    ReferenceColumn {
        table: 7,
        experiment: "5.4",
        tuple: 1,
        orders: [1.74, 0.74, 1.75, 0.75],
        level: 4,
        r: [
            0.001487479,
            0.000897005,
            0.001289706,
            0.005128014,
            0.010626022,
            0.008059078,
            0.003355921,
            0.004172376,
            0.015558505,
        ],
        e: 0.015558505,
    },
    ReferenceColumn {
        table: 7,
        experiment: "5.4",
        tuple: 1,
        orders: [1.74, 0.74, 1.75, 0.75],
        level: 5,
        r: [
            0.000259061,
            0.001372372,
            0.001904543,
            0.000846273,
            0.005347514,
            0.001348473,
            0.005044012,
            0.006247496,
            0.002592453,
        ],
        e: 0.006247496,
    },
    ReferenceColumn {
        table: 8,
        experiment: "5.4",
        tuple: 2,
        orders: [1.85, 0.84, 1.84, 0.86],
        level: 3,
        r: [
            0.001043474,
            0.004864753,
            0.007531036,
            0.003184477,
            0.01986764,
            0.005178906,
            0.019108768,
            0.023969195,
            0.009875031,
        ],
        e: 0.023969195,
    },
    ReferenceColumn {
        table: 8,
        experiment: "5.4",
        tuple: 2,
        orders: [1.85, 0.84, 1.84, 0.86],
        level: 4,
        r: [
            0.001580631,
            0.000851715,
            0.001215191,
            0.004853347,
            0.01007493,
            0.00767315,
            0.003200382,
            0.003977493,
            0.01479991,
        ],
        e: 0.01479991,
    },
    ReferenceColumn {
        table: 8,
        experiment: "5.4",
        tuple: 2,
        orders: [1.85, 0.84, 1.84, 0.86],
        level: 5,
        r: [
            0.000285226,
            0.001308136,
            0.001791164,
            0.000800194,
            0.005073756,
            0.001284615,
            0.004812836,
            0.005951558,
            0.002464505,
        ],
        e: 0.005951558,
    },
    ReferenceColumn {
        table: 8,
        experiment: "5.4",
        tuple: 3,
        orders: [1.99, 0.999, 1.99, 0.999],
        level: 3,
        r: [
            0.000811452,
            0.004063223,
            0.00650489,
            0.002840758,
            0.018087284,
            0.004755726,
            0.017676957,
            0.022229476,
            0.009152846,
        ],
        e: 0.022229476,
    },
    ReferenceColumn {
        table: 8,
        experiment: "5.4",
        tuple: 3,
        orders: [1.99, 0.999, 1.99, 0.999],
        level: 4,
        r: [
            0.001221587,
            0.000707617,
            0.001052725,
            0.004322004,
            0.009161733,
            0.007052825,
            0.002960286,
            0.003689323,
            0.013725496,
        ],
        e: 0.013725496,
    },
    ReferenceColumn {
        table: 8,
        experiment: "5.4",
        tuple: 3,
        orders: [1.99, 0.999, 1.99, 0.999],
        level: 5,
        r: [
            0.000218482,
            0.001083906,
            0.001554292,
            0.000713301,
            0.004611055,
            0.001180399,
            0.004451387,
            0.005521236,
            0.002285511,
        ],
        e: 0.005521236,
    },
    ReferenceColumn {
        table: 9,
        experiment: "5.5",
        tuple: 0,
        orders: [1.62, 0.62, 1.63, 0.63],
        level: 3,
        r: [
            8.97139e-05,
            0.000100115,
            5.77091e-05,
            6.5469e-06,
            1.11208e-05,
            1.00446e-06,
            3.35035e-07,
            5.16214e-07,
            3.33228e-07,
        ],
        e: 0.000100115,
    },
    ReferenceColumn {
        table: 9,
        experiment: "5.5",
        tuple: 0,
        orders: [1.62, 0.62, 1.63, 0.63],
        level: 4,
        r: [
            0.000114013,
            1.99386e-05,
            8.74395e-06,
            1.13029e-05,
            6.42343e-06,
            1.41904e-06,
            9.2542e-08,
            8.34868e-08,
            4.7882e-07,
        ],
        e: 0.000114013,
    },
    ReferenceColumn {
        table: 9,
        experiment: "5.5",
        tuple: 0,
        orders: [1.62, 0.62, 1.63, 0.63],
        level: 5,
        r: [
            2.11338e-05,
            3.23558e-05,
            1.24271e-05,
            1.79723e-06,
            3.41505e-06,
            2.54446e-07,
            1.62568e-07,
            1.27e-07,
            7.92003e-08,
        ],
        e: 3.23558e-05,
    },
    ReferenceColumn {
        table: 9,
        experiment: "5.5",
        tuple: 1,
        orders: [1.74, 0.75, 1.75, 0.73],
        level: 3,
        r: [
            0.000263448,
            0.00073694,
            0.000652171,
            0.000145553,
            0.00053632,
            9.95607e-05,
            0.000239534,
            0.000225345,
            6.33718e-05,
        ],
        e: 0.00073694,
    },
    ReferenceColumn {
        table: 9,
        experiment: "5.5",
        tuple: 1,
        orders: [1.74, 0.75, 1.75, 0.73],
        level: 4,
        r: [
            0.000711335,
            0.000145201,
            0.000102411,
            0.000234338,
            0.000283636,
            0.000143927,
            4.14819e-05,
            3.65178e-05,
            9.78497e-05,
        ],
        e: 0.000711335,
    },
    ReferenceColumn {
        table: 9,
        experiment: "5.5",
        tuple: 1,
        orders: [1.74, 0.75, 1.75, 0.73],
        level: 5,
        r: [
            0.000140386,
            0.000233376,
            0.000148087,
            3.79679e-05,
            0.000145605,
            2.45117e-05,
            6.33714e-05,
            5.39631e-05,
            1.60947e-05,
        ],
        e: 0.000233376,
    },
    ReferenceColumn {
        table: 10,
        experiment: "5.5",
        tuple: 2,
        orders: [1.85, 0.86, 1.86, 0.85],
        level: 3,
        r: [
            0.000251435,
            0.000713448,
            0.000635453,
            0.000143733,
            0.000535111,
            9.98045e-05,
            0.000240893,
            0.000226818,
            6.37848e-05,
        ],
        e: 0.000713448,
    },
    ReferenceColumn {
        table: 10,
        experiment: "5.5",
        tuple: 2,
        orders: [1.85, 0.86, 1.86, 0.85],
        level: 4,
        r: [
            0.000695738,
            0.000140733,
            9.98914e-05,
            0.000231169,
            0.000282798,
            0.000144303,
            4.17075e-05,
            3.67545e-05,
            9.84851e-05,
        ],
        e: 0.000695738,
    },
    ReferenceColumn {
        table: 10,
        experiment: "5.5",
        tuple: 2,
        orders: [1.85, 0.86, 1.86, 0.85],
        level: 5,
        r: [
            0.000137562,
            0.000226264,
            0.000144507,
            3.74694e-05,
            0.000145128,
            2.4571e-05,
            6.37099e-05,
            5.43123e-05,
            1.61986e-05,
        ],
        e: 0.000226264,
    },
    ReferenceColumn {
        table: 10,
        experiment: "5.5",
        tuple: 3,
        orders: [1.999, 0.99, 1.999, 0.99],
        level: 3,
        r: [
            0.000248841,
            0.000616155,
            0.000530612,
            0.000118666,
            0.000443924,
            8.248e-05,
            0.000201981,
            0.000191144,
            5.45404e-05,
        ],
        e: 0.000616155,
    },
    ReferenceColumn {
        table: 10,
        experiment: "5.5",
        tuple: 3,
        orders: [1.999, 0.99, 1.999, 0.99],
        level: 4,
        r: [
            0.000626827,
            0.000121868,
            8.38865e-05,
            0.000190845,
            0.000234036,
            0.000119746,
            3.48932e-05,
            3.10581e-05,
            8.40578e-05,
        ],
        e: 0.000626827,
    },
    ReferenceColumn {
        table: 10,
        experiment: "5.5",
        tuple: 3,
        orders: [1.999, 0.99, 1.999, 0.99],
        level: 5,
        r: [
            0.000123713,
            0.000195896,
            0.000121726,
            3.09928e-05,
            0.000119921,
            2.0363e-05,
            5.32375e-05,
            4.59741e-05,
            1.38439e-05,
        ],
        e: 0.000195896,
    },
];
