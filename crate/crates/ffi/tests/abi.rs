//! Exercises the C ABI through its exported functions: handle lifecycles,
//! error codes, round trips, and the generated header artifact.

use colormatch_ffi::*;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

fn last_error() -> String {
    unsafe { CStr::from_ptr(cm_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn take_string(ptr: *mut c_char) -> String {
    assert!(!ptr.is_null());
    let s = unsafe { CStr::from_ptr(ptr) }.to_string_lossy().into_owned();
    unsafe { cm_string_free(ptr) };
    s
}

fn generate(n: usize, p: f64, alphas: &[f64], seed: u64) -> *mut CmGraph {
    let mut g = ptr::null_mut();
    let code = unsafe {
        cm_graph_generate(n, p, alphas.as_ptr(), alphas.len(), seed, &mut g)
    };
    assert_eq!(code, CM_OK, "generate failed: {}", last_error());
    assert!(!g.is_null());
    g
}

/// Two colors on a 2×2 graph: color 1 on the diagonal, color 2 off it. Its
/// only perfect matchings are the two monochromatic ones.
const SPLIT_SQUARE: &str = "2 2\n1 1 1\n2 2 1\n1 2 2\n2 1 2\n";

#[test]
fn generate_inspect_round_trip() {
    let g = generate(12, 0.4, &[0.5, 0.5], 99);
    unsafe {
        assert_eq!(cm_graph_n(g), 12);
        assert_eq!(cm_graph_q(g), 2);
        assert!(cm_graph_edge_count(g) > 0);

        let mut text = ptr::null_mut();
        assert_eq!(cm_graph_to_text(g, &mut text), CM_OK);
        let rendered = take_string(text);
        assert!(rendered.starts_with("12 2\n"));

        // Text round trip reproduces the same graph.
        let c_text = CString::new(rendered.clone()).unwrap();
        let mut g2 = ptr::null_mut();
        assert_eq!(cm_graph_from_text(c_text.as_ptr(), &mut g2), CM_OK);
        let mut text2 = ptr::null_mut();
        assert_eq!(cm_graph_to_text(g2, &mut text2), CM_OK);
        assert_eq!(take_string(text2), rendered);

        // Same parameters, same graph; different seed, different graph.
        let g3 = generate(12, 0.4, &[0.5, 0.5], 99);
        let mut text3 = ptr::null_mut();
        assert_eq!(cm_graph_to_text(g3, &mut text3), CM_OK);
        assert_eq!(take_string(text3), rendered);

        cm_graph_free(g);
        cm_graph_free(g2);
        cm_graph_free(g3);
    }
}

#[test]
fn matching_and_profile_flow() {
    let text = CString::new(SPLIT_SQUARE).unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(cm_graph_from_text(text.as_ptr(), &mut g), CM_OK);

        let mut m = ptr::null_mut();
        assert_eq!(cm_maximum_matching(g, &mut m), CM_OK);
        assert_eq!(cm_matching_size(m), 2);
        assert!(cm_matching_is_perfect(m));

        let mut counts = [usize::MAX; 2];
        assert_eq!(cm_profile(g, m, counts.as_mut_ptr()), CM_OK);
        assert_eq!(counts.iter().sum::<usize>(), 2);
        // This graph's perfect matchings are monochromatic.
        assert!(counts == [2, 0] || counts == [0, 2]);

        let mut mtext = ptr::null_mut();
        assert_eq!(cm_matching_to_text(m, &mut mtext), CM_OK);
        let rendered = take_string(mtext);
        assert_eq!(rendered.lines().count(), 2);

        cm_matching_free(m);
        cm_graph_free(g);
    }
}

#[test]
fn mcp_enumeration_as_json() {
    let text = CString::new(SPLIT_SQUARE).unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(cm_graph_from_text(text.as_ptr(), &mut g), CM_OK);
        let mut json = ptr::null_mut();
        assert_eq!(cm_mcp_json(g, &mut json), CM_OK);
        let parsed: Vec<Vec<usize>> = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(parsed, vec![vec![0, 2], vec![2, 0]]);
        cm_graph_free(g);
    }
}

#[test]
fn recolor_success_and_dead_end() {
    // Identity walk: recoloring to the current profile must succeed.
    let g = generate(10, 0.5, &[0.5, 0.5], 7);
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(cm_maximum_matching(g, &mut m), CM_OK);
        assert!(cm_matching_is_perfect(m), "dense sample should match fully");
        let mut counts = [0usize; 2];
        assert_eq!(cm_profile(g, m, counts.as_mut_ptr()), CM_OK);

        let mut m2 = ptr::null_mut();
        assert_eq!(
            cm_recolor_to_target(g, m, counts.as_ptr(), 2, &mut m2),
            CM_OK
        );
        assert!(cm_matching_is_perfect(m2));
        cm_matching_free(m2);
        cm_matching_free(m);
        cm_graph_free(g);
    }

    // The split square has no alternating cycle between its two profiles:
    // the walk dead-ends and reports the profile it reached.
    let text = CString::new(SPLIT_SQUARE).unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(cm_graph_from_text(text.as_ptr(), &mut g), CM_OK);
        let mut m = ptr::null_mut();
        assert_eq!(cm_maximum_matching(g, &mut m), CM_OK);
        let target = [1usize, 1];
        let mut m2 = ptr::null_mut();
        let code = cm_recolor_to_target(g, m, target.as_ptr(), 2, &mut m2);
        assert_eq!(code, CM_ERR_EXPERIMENT);
        assert!(m2.is_null());
        assert!(last_error().contains("dead-ended"), "{}", last_error());
        cm_matching_free(m);
        cm_graph_free(g);
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        // Null handles.
        let mut out = ptr::null_mut();
        assert_eq!(cm_graph_to_text(ptr::null(), &mut out), CM_ERR_ARGUMENT);
        assert!(last_error().contains("null"));
        assert_eq!(cm_graph_n(ptr::null()), 0);
        assert_eq!(cm_matching_size(ptr::null()), 0);
        assert!(!cm_matching_is_perfect(ptr::null()));

        // Law that does not sum to 1.
        let mut g = ptr::null_mut();
        let bad = [0.5, 0.6];
        assert_eq!(
            cm_graph_generate(5, 0.5, bad.as_ptr(), 2, 0, &mut g),
            CM_ERR_ARGUMENT
        );

        // Probability outside the model's domain.
        let ok = [0.5, 0.5];
        assert_eq!(
            cm_graph_generate(5, 1.5, ok.as_ptr(), 2, 0, &mut g),
            CM_ERR_MODEL_DOMAIN
        );

        // Malformed text names the line in the message.
        let text = CString::new("2 2\n1 1\n").unwrap();
        assert_eq!(cm_graph_from_text(text.as_ptr(), &mut g), CM_ERR_ARGUMENT);
        assert!(last_error().contains("line 2"), "{}", last_error());

        // Frees tolerate null.
        cm_graph_free(ptr::null_mut());
        cm_matching_free(ptr::null_mut());
        cm_string_free(ptr::null_mut());
    }
}

#[test]
fn header_artifact_is_generated() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("include")
        .join("colormatch.h");
    let text = std::fs::read_to_string(header).expect("build script writes the header");
    for needle in [
        "COLORMATCH_H",
        "typedef struct CmGraph CmGraph;",
        "cm_graph_generate",
        "cm_recolor_to_target",
        "CM_ERR_EXPERIMENT",
    ] {
        assert!(text.contains(needle), "header is missing {needle:?}");
    }
}
