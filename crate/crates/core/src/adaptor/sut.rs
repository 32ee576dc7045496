use std::collections::VecDeque;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::net::{Shutdown, TcpStream};
use std::process::{Child, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::label::validate_symbol;
use crate::lts::{Lts, StateId};

/// Per-exchange timeout for line-protocol SUTs.
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(5);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SutError {
    #[error("SUT protocol error: {0}")]
    Protocol(String),
    #[error("SUT i/o error: {0}")]
    Io(String),
}

impl From<io::Error> for SutError {
    fn from(e: io::Error) -> Self {
        SutError::Io(e.to_string())
    }
}

/// A system under test that accepts one concrete input at a time and
/// answers with one concrete output.
pub trait SutEndpoint {
    fn send(&mut self, input: &str) -> Result<(), SutError>;
    fn receive(&mut self) -> Result<String, SutError>;
    /// Returns the SUT to its initial state.
    fn reset(&mut self) -> Result<(), SutError>;
}

impl<S: SutEndpoint + ?Sized> SutEndpoint for Box<S> {
    fn send(&mut self, input: &str) -> Result<(), SutError> {
        (**self).send(input)
    }

    fn receive(&mut self) -> Result<String, SutError> {
        (**self).receive()
    }

    fn reset(&mut self) -> Result<(), SutError> {
        (**self).reset()
    }
}

/// Picks among several outputs an output-nondeterministic machine allows.
#[derive(Debug, Clone)]
pub enum Resolver {
    Seeded(Box<ChaCha8Rng>),
    /// Indices into the sorted list of options, consumed only when there is a
    /// real choice; an exhausted script picks the first option.
    Scripted(VecDeque<usize>),
}

impl Resolver {
    pub fn seeded(seed: u64) -> Self {
        Resolver::Seeded(Box::new(ChaCha8Rng::seed_from_u64(seed)))
    }

    pub fn scripted(choices: impl IntoIterator<Item = usize>) -> Self {
        Resolver::Scripted(choices.into_iter().collect())
    }

    fn pick(&mut self, n: usize) -> usize {
        if n <= 1 {
            return 0;
        }
        match self {
            Resolver::Seeded(rng) => rng.gen_range(0..n),
            Resolver::Scripted(script) => script.pop_front().unwrap_or(0) % n,
        }
    }
}

/// Simulates an input-enabled Mealy machine.
#[derive(Debug, Clone)]
pub struct InProcessSut {
    machine: Lts,
    state: StateId,
    pending: Option<String>,
    resolver: Resolver,
}

impl InProcessSut {
    pub fn new(machine: Lts, resolver: Resolver) -> Result<Self> {
        if !machine.is_mealy() {
            return Err(Error::NotMealy("in-process SUT"));
        }
        if let Some((state, input)) = machine.first_disabled_input(&machine.inputs()) {
            return Err(Error::NotInputEnabled { state, input });
        }
        Ok(InProcessSut {
            state: machine.initial().to_string(),
            machine,
            pending: None,
            resolver,
        })
    }

    pub fn state(&self) -> &str {
        &self.state
    }

    pub fn machine(&self) -> &Lts {
        &self.machine
    }
}

impl SutEndpoint for InProcessSut {
    fn send(&mut self, input: &str) -> Result<(), SutError> {
        if self.pending.is_some() {
            return Err(SutError::Protocol(
                "input sent before the previous output was read".into(),
            ));
        }
        self.pending = Some(input.to_string());
        Ok(())
    }

    fn receive(&mut self) -> Result<String, SutError> {
        let input = self
            .pending
            .take()
            .ok_or_else(|| SutError::Protocol("receive without a pending input".into()))?;
        let options: Vec<_> = self
            .machine
            .outgoing(&self.state)
            .iter()
            .filter(|(l, _)| l.input() == Some(input.as_str()))
            .collect();
        if options.is_empty() {
            return Err(SutError::Protocol(format!(
                "input {input:?} is not accepted in state {}",
                self.state
            )));
        }
        let (label, target) = options[self.resolver.pick(options.len())];
        let output = label.output().expect("Mealy label").to_string();
        self.state = target.clone();
        Ok(output)
    }

    fn reset(&mut self) -> Result<(), SutError> {
        self.state = self.machine.initial().to_string();
        self.pending = None;
        Ok(())
    }
}

/// A SUT speaking the newline-delimited text protocol: one input symbol per
/// line out, one output symbol per line back, and `RESET` to restart.
pub struct LineSut {
    writer: Box<dyn Write + Send>,
    lines: Receiver<io::Result<String>>,
    timeout: Duration,
    child: Option<Child>,
    socket: Option<TcpStream>,
}

impl LineSut {
    /// Speaks the protocol over an arbitrary pair of streams. Reading happens
    /// on a helper thread so that each exchange can time out.
    pub fn from_streams<R, W>(reader: R, writer: W, timeout: Duration) -> Self
    where
        R: Read + Send + 'static,
        W: Write + Send + 'static,
    {
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(reader).lines() {
                let stop = line.is_err();
                if tx.send(line).is_err() || stop {
                    break;
                }
            }
        });
        LineSut {
            writer: Box::new(writer),
            lines: rx,
            timeout,
            child: None,
            socket: None,
        }
    }

    /// Runs `command` through `sh -c` and talks to its stdin and stdout.
    pub fn spawn(command: &str, timeout: Duration) -> io::Result<Self> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let mut sut = LineSut::from_streams(stdout, stdin, timeout);
        sut.child = Some(child);
        Ok(sut)
    }

    pub fn connect(addr: &str, timeout: Duration) -> io::Result<Self> {
        let stream = TcpStream::connect(addr)?;
        let reader = stream.try_clone()?;
        let socket = stream.try_clone()?;
        let mut sut = LineSut::from_streams(reader, stream, timeout);
        sut.socket = Some(socket);
        Ok(sut)
    }

    fn write_line(&mut self, line: &str) -> Result<(), SutError> {
        self.writer.write_all(line.as_bytes())?;
        self.writer.write_all(b"\n")?;
        self.writer.flush()?;
        Ok(())
    }
}

impl SutEndpoint for LineSut {
    fn send(&mut self, input: &str) -> Result<(), SutError> {
        self.write_line(input)
    }

    fn receive(&mut self) -> Result<String, SutError> {
        match self.lines.recv_timeout(self.timeout) {
            Ok(Ok(line)) => {
                let line = line.trim_end_matches('\r').to_string();
                validate_symbol(&line).map_err(|_| SutError::Protocol(format!("malformed output line {line:?}")))?;
                Ok(line)
            }
            Ok(Err(e)) => Err(e.into()),
            Err(RecvTimeoutError::Timeout) => Err(SutError::Protocol(format!(
                "no reply within {} ms",
                self.timeout.as_millis()
            ))),
            Err(RecvTimeoutError::Disconnected) => Err(SutError::Protocol("SUT closed the connection".into())),
        }
    }

    fn reset(&mut self) -> Result<(), SutError> {
        self.write_line("RESET")
    }
}

impl Drop for LineSut {
    fn drop(&mut self) {
        if let Some(socket) = &self.socket {
            // the reader thread holds a clone, so dropping the writer alone keeps the connection open
            let _ = socket.shutdown(Shutdown::Both);
        }
        if let Some(child) = self.child.as_mut() {
            // closing stdin lets a well-behaved child exit on its own
            self.writer = Box::new(io::sink());
            for _ in 0..20 {
                if let Ok(Some(_)) = child.try_wait() {
                    return;
                }
                thread::sleep(Duration::from_millis(10));
            }
            let _ = child.kill();
            let _ = child.wait();
        }
    }
}

/// Serves `machine` over the line protocol until `input` ends. Used by the
/// `sut-serve` command to stand in for a real system.
pub fn serve_lines<R: BufRead, W: Write>(sut: &mut InProcessSut, input: R, mut output: W) -> io::Result<()> {
    for line in input.lines() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line == "RESET" {
            let _ = sut.reset();
            continue;
        }
        let reply = sut.send(line).and_then(|_| sut.receive());
        match reply {
            Ok(o) => writeln!(output, "{o}")?,
            Err(e) => writeln!(output, "ERROR {e}")?,
        }
        output.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn in_process_follows_the_machine() {
        let mut sut = InProcessSut::new(fixtures::square_machine(), Resolver::seeded(0)).unwrap();
        sut.send("a").unwrap();
        assert_eq!(sut.receive().unwrap(), "0");
        assert_eq!(sut.state(), "q3");
        sut.send("b").unwrap();
        assert_eq!(sut.receive().unwrap(), "1");
        assert_eq!(sut.state(), "q0");
        sut.send("b").unwrap();
        sut.receive().unwrap();
        sut.reset().unwrap();
        assert_eq!(sut.state(), "q0");
    }

    #[test]
    fn in_process_requires_input_enabled() {
        let m = Lts::builder("q")
            .mealy_alphabet(["a", "b"], ["0"])
            .edge("q", "a/0", "q")
            .build()
            .unwrap();
        assert!(matches!(
            InProcessSut::new(m, Resolver::seeded(0)),
            Err(Error::NotInputEnabled { .. })
        ));
    }

    #[test]
    fn scripted_resolver_picks_listed_options() {
        let m = Lts::builder("q")
            .edge("q", "a/0", "q")
            .edge("q", "a/1", "q")
            .build()
            .unwrap();
        let mut sut = InProcessSut::new(m, Resolver::scripted([1, 0])).unwrap();
        let mut outs = Vec::new();
        for _ in 0..3 {
            sut.send("a").unwrap();
            outs.push(sut.receive().unwrap());
        }
        assert_eq!(outs, ["1", "0", "0"]);
    }

    #[test]
    fn line_sut_over_served_machine() {
        let machine = fixtures::square_machine();
        let (ours, theirs) = std::os::unix::net::UnixStream::pair().unwrap();
        let server = thread::spawn(move || {
            let mut sut = InProcessSut::new(machine, Resolver::seeded(0)).unwrap();
            let reader = BufReader::new(theirs.try_clone().unwrap());
            serve_lines(&mut sut, reader, theirs).unwrap();
        });
        let closer = ours.try_clone().unwrap();
        let mut client = LineSut::from_streams(ours.try_clone().unwrap(), ours, DEFAULT_TIMEOUT);
        client.send("a").unwrap();
        assert_eq!(client.receive().unwrap(), "0");
        client.send("b").unwrap();
        assert_eq!(client.receive().unwrap(), "1");
        client.reset().unwrap();
        client.send("b").unwrap();
        assert_eq!(client.receive().unwrap(), "0");
        closer.shutdown(std::net::Shutdown::Write).unwrap();
        server.join().unwrap();
    }

    #[test]
    fn line_sut_rejects_malformed_and_silent_peers() {
        let reply: &[u8] = b"two words\n";
        let mut sut = LineSut::from_streams(reply, io::sink(), Duration::from_millis(200));
        sut.send("a").unwrap();
        assert!(matches!(sut.receive(), Err(SutError::Protocol(_))));
        let (ours, _theirs) = std::os::unix::net::UnixStream::pair().unwrap();
        let mut silent = LineSut::from_streams(ours.try_clone().unwrap(), ours, Duration::from_millis(100));
        silent.send("a").unwrap();
        assert!(matches!(silent.receive(), Err(SutError::Protocol(m)) if m.contains("no reply")));
    }

    #[test]
    fn dropping_a_tcp_sut_closes_the_connection() {
        let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap().to_string();
        let server = thread::spawn(move || {
            let (stream, _) = listener.accept().unwrap();
            BufReader::new(stream).lines().count()
        });
        let mut sut = LineSut::connect(&addr, DEFAULT_TIMEOUT).unwrap();
        sut.reset().unwrap();
        drop(sut);
        assert_eq!(server.join().unwrap(), 1);
    }
}
