public class Answer {
    public static int ramp(int up, int down) {
        int level = 0;
        int steps = 0;
        for (int i = 0; i < up; i++) {
            level = level + 2;
            steps = steps + 1;
        }
        for (int j = 0; j < down; j++) {
            level = level - 1;
            steps = steps + 1;
        }
        return level + steps;
    }
}
