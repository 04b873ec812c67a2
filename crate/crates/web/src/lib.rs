//! WebAssembly bindings for the static demo page in `www/`. Each exported
//! function takes plain strings and returns a JSON string; failures come
//! back as `{"error": "..."}` rather than as exceptions.

use origami_forge::haupt::{haupt_verdict, Character};
use origami_forge::invariants::{classify_component, hyperelliptic_witness, is_primitive, spin_parity};
use origami_forge::perm::Perm;
use origami_forge::render::render_svg;
use origami_forge::surface::{GridSurface, StratumSig};
use origami_forge::targeting::{build, ComponentLabel};
use origami_forge::Result;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest degree the page will try to build, to keep the tab responsive.
pub const MAX_WEB_DEGREE: usize = 40;

fn wrap(r: Result<Value>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

pub fn build_value(stratum: &str, component: &str, degree: usize) -> Result<Value> {
    if degree > MAX_WEB_DEGREE {
        return Err(origami_forge::Error::InvalidParameters(format!(
            "degree {} is above the page limit {}",
            degree, MAX_WEB_DEGREE
        )));
    }
    let alpha = StratumSig::parse(stratum)?;
    let comp: ComponentLabel = component.parse()?;
    let cert = build(&alpha, comp, degree)?;
    let title = format!("{} {} degree {}", cert.stratum, cert.component, cert.degree);
    let svg = render_svg(&cert.surface, Some(&title));
    Ok(json!({ "certificate": cert, "svg": svg }))
}

pub fn classify_value(h: &str, v: &str) -> Result<Value> {
    let hp = Perm::parse_cycles(h, None)?;
    let vp = Perm::parse_cycles(v, None)?;
    let d = hp.degree().max(vp.degree());
    let s = GridSurface::from_permutations(&Perm::parse_cycles(h, Some(d))?, &Perm::parse_cycles(v, Some(d))?)?;
    let st = s.stratum()?;
    let mut out = json!({
        "degree": d,
        "stratum": st,
        "genus": st.genus(),
        "component": classify_component(&s)?,
        "primitive": is_primitive(&s)?.0,
        "hyperelliptic": !st.is_empty() && hyperelliptic_witness(&s)?.is_some(),
        "svg": render_svg(&s, Some(&format!("{} degree {}", st, d))),
    });
    if st.all_even() && !st.is_empty() {
        out["spin"] = json!(spin_parity(&s)?.parity);
    }
    Ok(out)
}

pub fn haupt_value(character: &str, stratum: &str) -> Result<Value> {
    let chi = Character::from_json(character)?;
    let alpha = StratumSig::parse(stratum)?;
    Ok(serde_json::to_value(haupt_verdict(&chi, &alpha)?).expect("serializable"))
}

/// Certificate and SVG picture of a cover in the requested component.
#[wasm_bindgen]
pub fn build_cover(stratum: &str, component: &str, degree: u32) -> String {
    wrap(build_value(stratum, component, degree as usize))
}

#[wasm_bindgen]
pub fn classify_origami(h: &str, v: &str) -> String {
    wrap(classify_value(h, v))
}

#[wasm_bindgen]
pub fn haupt_check(character: &str, stratum: &str) -> String {
    wrap(haupt_value(character, stratum))
}
