//! Run the adaptor against a SUT on the other end of a TCP connection,
//! served here by a thread speaking the line protocol.

use std::io::BufReader;
use std::net::TcpListener;
use std::thread;

use actcode::adaptor::{run_adaptor, serve_lines, InProcessSut, LineSut, Resolver, SutEndpoint, DEFAULT_TIMEOUT};
use actcode::fixtures;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let listener = TcpListener::bind("127.0.0.1:0")?;
    let addr = listener.local_addr()?.to_string();
    let server = thread::spawn(move || -> std::io::Result<()> {
        let (stream, _) = listener.accept()?;
        let mut sut = InProcessSut::new(fixtures::square_machine(), Resolver::seeded(0)).expect("valid machine");
        serve_lines(&mut sut, BufReader::new(stream.try_clone()?), stream)
    });

    let mut sut = LineSut::connect(&addr, DEFAULT_TIMEOUT)?;
    sut.reset()?;
    let run = run_adaptor(&fixtures::adaptive_code().to_tree(), sut, ["C", "B", "C"])?;
    for event in &run.transcript {
        println!("{event}");
    }
    server.join().expect("server thread")?;
    Ok(())
}
