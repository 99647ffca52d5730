"""coexistence_sim 패키지를 테스트 하는 모듈입니다."""
