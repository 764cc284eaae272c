//! Cylinder functions against 900-digit references and classical identities.

// some reference arguments are exactly pi or pi/2
#![allow(clippy::approx_constant)]

use magskin_core::bessel::{bessel_h1, bessel_j, BesselEval};
use magskin_core::Complex64;
use std::f64::consts::PI;

type Row = (u32, f64, f64, f64, f64, f64, f64, f64, f64, f64, f64);

/// (m, Re z, Im z, ln|J|, arg J, Re J'/J, Im J'/J, ln|H1|, arg H1, Re H1'/H1, Im H1'/H1)
#[rustfmt::skip]
const REFERENCE: &[Row] = &[
    (0, 1.0, 0.0, -0.26762106473743311, 0.0, -0.57508091500430596, 0.0, -0.26101340233742511, 0.11483136761414813, -0.4513241865340087, 1.0729845872563194),
    (1, 0.5, 0.25, -1.2980857346571995, 0.43215233147280772, 1.4746993832807222, -0.86431634110644482, 0.14319120994008212, -1.7913045401443819, -1.3463197844653429, 1.3950483072565978),
    (4, 2.0, 3.0, -0.54989034368534112, -2.9259948524255569, 0.45128455506101529, -1.2244404042846672, -2.193299303726671, 1.6115411520809142, -0.44194337739518369, 1.369282321639541),
    (0, 0.01, 0.0, -2.5000156251736135e-5, 0.0, -0.0050000625010416847, 0.0, 1.152925556241406, -1.249597933666485, -19.076413803944865, 6.3454395146506758),
    (3, 0.01, 0.005, -17.352000929399141, 1.390936576996559, 239.99874999960937, -120.00062500214844, 15.108663442349135, -2.9617266536801237, -239.99749999219873, 120.00125004297642),
    (0, 5.0, 0.0, -1.7282396281257006, 3.1415926535897932, -1.8445106584266944, 0.0, -1.0328729255549103, -2.0931155540875483, -0.099102279467527901, 1.0047364149063695),
    (2, 7.5, 0.5, -1.2944924210596425, 2.7580784275125319, -0.619207257628239, -0.63162874899326048, -1.7014042408211444, -2.4976549199554095, -0.075046998969937053, 0.972773187840047),
    (10, 15.0, 2.0, -0.67323722625409989, -2.0288437781773299, 0.071704391012618881, -0.80784408229327987, -2.9677913349976709, 1.774194321400924, -0.12367091406432606, 0.78434891284645087),
    (0, 1.5, 0.0075, -0.66972618392567835, -0.0081754602194072327, -1.0900108060649332, -0.010961100193725645, -0.45575906657324439, 0.63937265164973107, -0.31293228576884853, 1.0410648993968674),
    (2, 2.2, 0.011, -0.92868173272067414, 0.0054801505192446354, 0.49818371902244802, -0.0071302154311139624, -0.43429105097761819, -0.92493207791243724, -0.39766342977915405, 0.68290848637316999),
    (8, 1.0, 0.005, -16.177496136696714, 0.039721113388426231, 7.9440893561993805, -0.040279112244613459, 12.961329619090558, -1.6104366937691875, -7.9279400878883766, 0.040362676998948182),
    (0, 50.0, 30.0, 27.049272747081187, 0.78252533470221593, -0.0073853978484160005, -0.9956061751677156, -32.259785299032543, -1.3229124101212421, -0.0073205470227013736, 1.0044284456802197),
    (1, 100.0, 41.0, 37.738327060670057, 2.6893892323241965, -0.0042580392698200551, -0.99822187671233132, -43.565893517662052, -3.0785089967161692, -0.0043031049128375607, 1.0017323964321541),
    (5, 1098.7, 455.1, 450.63655350648716, 3.007655409778786, -0.00038225243264673314, -0.99983290880294626, -458.86233488395014, 2.8828218633799755, -0.00039462717286831298, 1.0001547166516959),
    (0, 1098.7, 455.1, 450.64057282034922, 1.4465731369999344, -0.00038849945697662957, -0.99983916543991123, -458.86636044758258, -1.8392749211140721, -0.00038837446038185456, 1.0001609595554964),
    (200, 1.0, 0.0, -1001.8626670893183, 0.0, 199.99751242249401, 0.0, 995.41963233738963, -1.5707963267948966, -199.99748742124388, 1.5608929475553233e-865),
    (200, 250.0, 10.0, 2.5850654754123397, -1.5043243351237216, 0.036845033972273562, -0.60313990711323753, -8.7504871101898972, 1.3945943327529978, -0.047566489151735109, 0.60507507963462218),
    (50, 30.0, 0.0, -17.698865612619677, 0.0, 1.3423342959679832, 0.0, 12.865557881983874, -1.5707963267948434, -1.3235282004373181, 1.4186565865537462e-13),
    (0, 0.0, 1000.0, 995.62730888986946, 0.0, 0.0, -0.99949987487480428, -1003.6797939297008, -1.5707963267948966, 0.0, 1.0004998751248051),
    (20, 700.0, 700.0, 695.48946184672704, -2.3165968748191728, -0.00015304303901453422, -0.99964273200683064, -703.5318456991849, 1.5309947573510446, -0.00056095119438696948, 1.0003573089660858),
    (1, 3.0, -2.0, 0.3939349535108845, 1.0167520826206866, -0.1303459803692725, 0.89896816020211475, 1.0846449989745993, 1.0370054081710877, -0.090317511796070456, 0.90318834100192892),
    (2, 12.0, 0.0, -2.465922064307339, 3.1415926535897932, 2.4642741374580612, 0.0, -1.4617184361980274, 1.9458648166584401, -0.04275683014932427, 0.98703233155751823),
    (0, 2.5, 0.0, -3.0285907183886597, 3.1415926535897932, 10.273983114794838, 0.0, -0.69231772303519098, 1.6676349316289773, -0.19418243854442805, 1.0169032796011575),
    (7, 40.0, 25.0, 21.88184815878954, 2.4745185727167409, 0.00092876155458751531, -0.98938165416134387, -26.875604270840303, -3.0430535705801337, -0.018848511019247879, 1.0010826889326345),
    (0, 10.98, 4.55, 2.3970899047126119, 2.1854634581953188, -0.039672435383746356, -0.98457644866938313, -6.017750809791584, -2.5775863454667092, -0.038218308774809466, 1.0166627522794714),
];

fn wrap(a: f64) -> f64 {
    (a + PI).rem_euclid(2.0 * PI) - PI
}

fn log_gap(e: &BesselEval, ln_mod: f64, arg: f64) -> f64 {
    let l = e.ln_value();
    let dre = l.re - ln_mod;
    let dim = wrap(l.im - arg);
    (dre * dre + dim * dim).sqrt()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn matches_high_precision_references() {
    for &(m, re, im, lj, aj, djr, dji, lh, ah, dhr, dhi) in REFERENCE {
        let z = Complex64::new(re, im);
        let j = bessel_j(m, z).unwrap();
        assert!(log_gap(&j, lj, aj) < 1e-11, "J_{m}({z}): gap {}", log_gap(&j, lj, aj));
        assert!(
            rel(j.log_derivative(), Complex64::new(djr, dji)) < 1e-11,
            "J_{m}'/J_{m}({z})"
        );
        let h = bessel_h1(m, z).unwrap();
        assert!(log_gap(&h, lh, ah) < 1e-11, "H_{m}({z}): gap {}", log_gap(&h, lh, ah));
        assert!(
            rel(h.log_derivative(), Complex64::new(dhr, dhi)) < 1e-11,
            "H_{m}'/H_{m}({z})"
        );
    }
}
