use std::ffi::CStr;
use std::path::Path;
use std::process::Command;
use std::ptr;

use surface_decode::rng::SplitMix64;
use surface_decode::smw::classical_weight;
use surface_decode::{build_lattice, Bits, Chain, CodeFamily, Family, Grade, Side};
use surface_decode_ffi::*;

fn new_code(family: SdFamily, l: usize) -> *mut SdCode {
    let mut code = ptr::null_mut();
    assert_eq!(unsafe { sd_code_new(family, l, &mut code) }, SdStatus::Ok);
    assert!(!code.is_null());
    code
}

fn sizes(code: *const SdCode, side: SdSide) -> (usize, usize) {
    let (mut n, mut m) = (0, 0);
    assert_eq!(unsafe { sd_code_sizes(code, side, &mut n, &mut m) }, SdStatus::Ok);
    (n, m)
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(sd_last_error()) }.to_string_lossy().into_owned()
}

fn syndrome(code: *const SdCode, side: SdSide, e: &[u8]) -> Vec<u8> {
    let (_, m) = sizes(code, side);
    let mut s = vec![0u8; m];
    assert_eq!(unsafe { sd_syndrome(code, side, e.as_ptr(), e.len(), s.as_mut_ptr(), m) }, SdStatus::Ok);
    s
}

#[test]
fn sizes_match_the_library() {
    for (family, kind) in [(SdFamily::Toric, Family::Toric), (SdFamily::Planar, Family::Planar), (SdFamily::Rotated, Family::Rotated)] {
        let code = new_code(family, 5);
        for (side, s) in [(SdSide::Primal, Side::Primal), (SdSide::Dual, Side::Dual)] {
            let lat = build_lattice(CodeFamily::new(kind, 5).unwrap(), s).unwrap();
            assert_eq!(sizes(code, side), (lat.n_qubits(), lat.n_checks()));
        }
        unsafe { sd_code_free(code) };
    }
}

#[test]
fn argument_errors_are_reported() {
    let mut code = ptr::null_mut();
    assert_eq!(unsafe { sd_code_new(SdFamily::Toric, 1, &mut code) }, SdStatus::InvalidArgument);
    assert!(code.is_null());
    assert!(last_error().contains("L >= 2"));
    assert_eq!(unsafe { sd_code_new(SdFamily::Toric, 3, ptr::null_mut()) }, SdStatus::NullPointer);
    let (mut n, mut m) = (0, 0);
    assert_eq!(unsafe { sd_code_sizes(ptr::null(), SdSide::Primal, &mut n, &mut m) }, SdStatus::NullPointer);

    let code = new_code(SdFamily::Planar, 3);
    let (n, m) = sizes(code, SdSide::Primal);
    let bad = vec![2u8; n];
    let mut s = vec![0u8; m];
    assert_eq!(
        unsafe { sd_syndrome(code, SdSide::Primal, bad.as_ptr(), n, s.as_mut_ptr(), m) },
        SdStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { sd_syndrome(code, SdSide::Primal, bad.as_ptr(), n - 1, s.as_mut_ptr(), m) },
        SdStatus::InvalidArgument
    );
    let mut dec = ptr::null_mut();
    assert_eq!(
        unsafe { sd_smlc_new(code, SdSide::Primal, 3, 4, SdBackend::Exact, &mut dec) },
        SdStatus::InvalidArgument
    );
    assert_eq!(unsafe { sd_smlc_new(code, SdSide::Primal, 1, 0, SdBackend::Exact, &mut dec) }, SdStatus::InvalidArgument);
    unsafe { sd_code_free(code) };
    unsafe { sd_code_free(ptr::null_mut()) };
    unsafe { sd_smlc_free(ptr::null_mut()) };
}

#[test]
fn odd_toric_syndrome_is_rejected() {
    let code = new_code(SdFamily::Toric, 4);
    let (n, m) = sizes(code, SdSide::Primal);
    let mut s = vec![0u8; m];
    s[3] = 1;
    let mut out = vec![0u8; n];
    let status = unsafe {
        sd_decode_smw(code, SdSide::Primal, SdSolver::Separator, s.as_ptr(), m, out.as_mut_ptr(), n, ptr::null_mut())
    };
    assert_eq!(status, SdStatus::InvalidSyndrome);
    assert_eq!(last_error(), "invalid syndrome parity");
    unsafe { sd_code_free(code) };
}

#[test]
fn minimum_weight_corrections_round_trip() {
    let mut rng = SplitMix64::new(4);
    for (family, kind, l) in [(SdFamily::Toric, Family::Toric, 6), (SdFamily::Rotated, Family::Rotated, 5)] {
        let code = new_code(family, l);
        for (side, s) in [(SdSide::Primal, Side::Primal), (SdSide::Dual, Side::Dual)] {
            let lat = build_lattice(CodeFamily::new(kind, l).unwrap(), s).unwrap();
            let (n, m) = sizes(code, side);
            for solver in [SdSolver::Blossom, SdSolver::Separator] {
                for _ in 0..20 {
                    let e: Vec<u8> = (0..n).map(|_| rng.coin(0.1) as u8).collect();
                    let syn = syndrome(code, side, &e);
                    let mut corr = vec![0u8; n];
                    let mut w = 0u64;
                    let status = unsafe { sd_decode_smw(code, side, solver, syn.as_ptr(), m, corr.as_mut_ptr(), n, &mut w) };
                    assert_eq!(status, SdStatus::Ok, "{}", last_error());
                    assert_eq!(syndrome(code, side, &corr), syn);
                    assert_eq!(corr.iter().map(|&b| b as u64).sum::<u64>(), w);
                    let chain = Chain::new(Grade::C0, Bits::from_bools(&syn.iter().map(|&b| b == 1).collect::<Vec<_>>()));
                    assert_eq!(w as i128, classical_weight(&lat, &chain, &|_| 1).unwrap());
                    let mut eq = false;
                    let status = unsafe { sd_equivalent(code, side, corr.as_ptr(), corr.as_ptr(), n, &mut eq) };
                    assert_eq!(status, SdStatus::Ok);
                    assert!(eq);
                }
            }
        }
        unsafe { sd_code_free(code) };
    }
}

#[test]
fn coset_decoder_matches_the_library() {
    let code = new_code(SdFamily::Rotated, 3);
    let pair = surface_decode::LatticePair::new(CodeFamily::new(Family::Rotated, 3).unwrap()).unwrap();
    let p = num_rational::BigRational::new(1.into(), 10.into());
    let reference = surface_decode::smlc::SmlcDecoder::new(
        &pair,
        Side::Dual,
        &vec![p; 9],
        surface_decode::smlc::Backend::Exact,
    )
    .unwrap();
    let mut dec = ptr::null_mut();
    assert_eq!(unsafe { sd_smlc_new(code, SdSide::Dual, 1, 10, SdBackend::Exact, &mut dec) }, SdStatus::Ok);
    let (n, m) = sizes(code, SdSide::Dual);
    let mut rng = SplitMix64::new(8);
    for _ in 0..30 {
        let e: Vec<u8> = (0..n).map(|_| rng.coin(0.2) as u8).collect();
        let syn = syndrome(code, SdSide::Dual, &e);
        let mut corr = vec![0u8; n];
        let (mut chosen, mut tie) = (9usize, false);
        let status = unsafe { sd_smlc_decode(dec, syn.as_ptr(), m, corr.as_mut_ptr(), n, &mut chosen, &mut tie) };
        assert_eq!(status, SdStatus::Ok, "{}", last_error());
        assert_eq!(syndrome(code, SdSide::Dual, &corr), syn);
        let chain = Chain::new(Grade::C0, Bits::from_bools(&syn.iter().map(|&b| b == 1).collect::<Vec<_>>()));
        let want = reference.decide(&chain).unwrap();
        assert_eq!((chosen, tie), (want.chosen, want.tie));
        let want_bits: Vec<u8> = (0..n).map(|i| want.chosen_error().bits.get(i) as u8).collect();
        assert_eq!(corr, want_bits);
    }
    unsafe { sd_smlc_free(dec) };
    unsafe { sd_code_free(code) };
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(sd_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn generated_header_declares_the_api() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/surface_decode.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "sd_code_new",
        "sd_code_free",
        "sd_code_sizes",
        "sd_syndrome",
        "sd_equivalent",
        "sd_decode_smw",
        "sd_smlc_new",
        "sd_smlc_decode",
        "sd_smlc_free",
        "sd_last_error",
        "sd_version",
        "typedef struct SdCode SdCode;",
        "SD_STATUS_OK = 0",
        "SD_STATUS_PANIC = 5",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }

    // compile a small C caller against the header when a C compiler exists
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("caller.c");
    std::fs::write(
        &src,
        "#include \"surface_decode.h\"\n\
         int main(void) {\n\
           SdCode *code = NULL;\n\
           if (sd_code_new(SD_FAMILY_ROTATED, 3, &code) != SD_STATUS_OK) return 1;\n\
           size_t n, m;\n\
           sd_code_sizes(code, SD_SIDE_PRIMAL, &n, &m);\n\
           sd_code_free(code);\n\
           return 0;\n\
         }\n",
    )
    .unwrap();
    let include = header.parent().unwrap();
    match Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(include)
        .arg(&src)
        .output()
    {
        Ok(o) => assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr)),
        Err(_) => eprintln!("no C compiler found; skipped the compile check"),
    }
}
