use halfwall::{greens, Vec3};
use std::process::Command;

fn halfwall() -> Command {
    Command::new(env!("CARGO_BIN_EXE_halfwall"))
}

#[test]
fn greens_eval_prints_the_tensor() {
    let out = halfwall().args(["greens", "eval", "--x", "1,1,1", "--y", "2,0.5,-1"]).output().unwrap();
    assert!(out.status.success());
    let vals: Vec<f64> = String::from_utf8(out.stdout).unwrap().lines().map(|l| l.parse().unwrap()).collect();
    let g = greens::greens(&Vec3::new(1.0, 1.0, 1.0), &Vec3::new(2.0, 0.5, -1.0)).unwrap();
    assert_eq!(vals.len(), 9);
    for (k, v) in vals.iter().enumerate() {
        assert_eq!(*v, g[(k / 3, k % 3)]);
    }
}

#[test]
fn bad_input_exits_with_two() {
    let wall = halfwall().args(["greens", "eval", "--x", "-0.5,1,1", "--y", "2,0,0"]).output().unwrap();
    assert_eq!(wall.status.code(), Some(2));
    let short = halfwall().args(["greens", "eval", "--x", "1,1", "--y", "2,0,0"]).output().unwrap();
    assert_eq!(short.status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("halfwall-cli-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("bad.toml");
    std::fs::write(&cfg, "q = 0.5\n").unwrap();
    let bad = halfwall().arg("--config").arg(&cfg).arg("converge-r").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn analytic_writes_the_channel_profile() {
    let dir = std::env::temp_dir().join(format!("halfwall-cli-{}", std::process::id()));
    let out = halfwall().arg("--out").arg(&dir).arg("analytic").output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.lines().all(|l| l.starts_with("PASS")), "{stdout}");
    let table = std::fs::read_to_string(dir.join("channel.dat")).unwrap();
    assert_eq!(table.lines().count(), 1002);
    std::fs::remove_dir_all(&dir).unwrap();
}
