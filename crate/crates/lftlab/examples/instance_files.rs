//! Writing and reading instance documents, then transforming the result.

use lftlab::fixtures::ex2;
use lftlab::io::{Builtin, BuiltinParams, Instance, InstanceFile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = InstanceFile::from_function(&ex2()).to_json();
    print!("{text}");
    let Instance::OneD(f) = InstanceFile::parse(&text)?.resolve()? else { unreachable!() };
    assert_eq!(f.samples(), ex2().samples());

    let cube = InstanceFile::builtin(Builtin::HypercubeZ, BuiltinParams { z: Some("0110".into()), ..Default::default() });
    print!("{}", cube.to_json());
    if let Instance::MultiD(t) = cube.resolve()? {
        println!("hypercube instance: d = {}, {} samples", t.d(), t.len());
    }
    Ok(())
}
